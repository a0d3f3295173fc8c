"""Lookup benchmark: processor cycles against a linear-scan baseline."""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .amp import AmpConfig, analyze_word, naive_scan_baseline
from .exceptions import MorphoforgeError


@dataclass(frozen=True)
class ProbeRow:
    lexicon_size: int
    probe: str
    found: bool
    amp_cycles: int
    scan_comparisons: int


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[ProbeRow, ...]

    def sizes(self):
        return sorted({r.lexicon_size for r in self.rows})

    def summary(self):
        out = []
        for size in self.sizes():
            rows = [r for r in self.rows if r.lexicon_size == size]
            out.append({
                "lexiconSize": size,
                "probes": len(rows),
                "found": sum(r.found for r in rows),
                "ampCyclesMedian": statistics.median(r.amp_cycles for r in rows),
                "scanComparisonsMedian": statistics.median(r.scan_comparisons for r in rows),
            })
        return out

    def to_csv(self):
        lines = ["lexiconSize,probe,found,ampCycles,scanComparisons"]
        for r in self.rows:
            lines.append(f"{r.lexicon_size},{r.probe},{int(r.found)},{r.amp_cycles},{r.scan_comparisons}")
        return "\n".join(lines) + "\n"

    def __add__(self, other):
        return BenchReport(self.rows + other.rows)


def bench(image, lexicon, probes, config=AmpConfig()):
    """Run every probe through the processor model and the scan baseline."""
    probes = list(probes)
    lexicon = list(lexicon)
    if not probes:
        raise MorphoforgeError("empty probe set")
    if not lexicon or not image.result_store:
        raise MorphoforgeError("empty lexicon or image")
    rows = []
    for p in probes:
        res = analyze_word(image, p, config)
        _, comparisons = naive_scan_baseline(lexicon, p, image.alphabet)
        rows.append(ProbeRow(len(lexicon), p, bool(res.readings), res.cycles, comparisons))
    return BenchReport(tuple(rows))
