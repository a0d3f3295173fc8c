"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error (bad or missing input),
3 internal invariant violation.  Diagnostics go to stderr; data goes to
stdout or to the file named by ``--output`` (written atomically).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from ._io import atomic_write_text, load_key_values
from .amp import AmpConfig, analyze_sentence, analyze_word, format_trace
from .bench import BenchReport, bench
from .costmodel import (RealizationPoint, WeightVector, memory_cost, pareto_front,
                        select_realization)
from .exceptions import ConfigError, MorphoforgeError
from .lexicon import (Alphabet, CombinationScheme, compile_lexicon, fit_gaussian, histogram_mean,
                      load_image, load_lexicon, range_counts, save_image, stem_length_histogram)
from .lexicon.stats import combination_counts
from .ontometrics import Ontograph, concept_union, metrics
from .synthetic import absent_probes, synthetic_lexicon
from .textmodel import AccDictionary, RawDocument, decode_utf8, index_structure, segment, structure_to_dict

CONFIG_ENV = "MORPHOFORGE_CONFIG"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- helpers -----------------------------------------------------------------

def _emit(args, text):
    out = getattr(args, "output", None)
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _dump_json(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=False) + "\n"


def _need(path):
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"no such file: {p}")
    return p


def _alphabet(args):
    return Alphabet.load(_need(args.alphabet)) if getattr(args, "alphabet", None) else Alphabet.ukrainian()


def _config(args):
    """Merge defaults < config file < ``--set`` flags into an :class:`AmpConfig`."""
    values = {}
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        values.update(load_key_values(_need(path)))
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        values[k.strip()] = v.strip()
    return AmpConfig.from_mapping(values)


def _read_text(path):
    return decode_utf8(_need(path).read_bytes())


def _csv_rows(path):
    with open(_need(path), newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return rows


def _reading_dict(r):
    return {"lemma": r.lemma, "tags": list(r.tags), "stemLen": r.stem_len, "endingLen": r.ending_len}


# -- subcommands -------------------------------------------------------------

def cmd_tokenize(args):
    acc = AccDictionary.load(_need(args.acc)) if args.acc else None
    docs = []
    for k, path in enumerate(args.input, 1):
        gs = segment(RawDocument(Path(path).name, _read_text(path)), acc, doc_index=k)
        docs.append(structure_to_dict(index_structure(gs)))
    _emit(args, _dump_json({"documents": docs}))


def cmd_compile(args):
    alphabet = _alphabet(args)
    entries = load_lexicon(_need(args.lexicon))
    scheme = CombinationScheme.default(args.max_word_len)
    img = compile_lexicon(entries, alphabet, scheme, max_word_len=args.max_word_len,
                          max_ending_len=args.max_ending_len)
    save_image(img, args.output)
    print(f"compiled {len(entries) - img.duplicates} entries ({img.duplicates} duplicates dropped), "
          f"{img.stem_cell_count} stem cells, {len(img.ending_memory)} ending cells -> {args.output}",
          file=sys.stderr)


def _parse_ranges(text):
    out = []
    for part in text.split(","):
        part = part.strip().upper().replace(" ", "")
        if not part:
            continue
        try:
            if "-" in part:
                a, b = part.split("-")
                out.append((int(a.lstrip("C")), int(b.lstrip("C"))))
            else:
                n = int(part.lstrip("C"))
                out.append((n, n))
        except ValueError:
            raise UsageError(f"bad range {part!r}; expected e.g. C2-C4") from None
    return out


def cmd_stats(args):
    alphabet = _alphabet(args)
    entries = load_lexicon(_need(args.lexicon))
    hist = stem_length_histogram(entries)
    scheme = CombinationScheme.default(args.max_word_len)
    tables = combination_counts(entries, scheme, alphabet)
    groups = {t.group.label: {"count": t.count, "dataWidthBits": t.data_width_bits,
                              "mode": t.group.mode.value} for t in tables}
    longest = max(hist) if hist else 1
    singles = range_counts(entries, alphabet, [(p, p) for p in range(2, longest + 1)])
    extra = range_counts(entries, alphabet, _parse_ranges(args.ranges)) if args.ranges else {}
    stems = sum(hist.values())
    report = {
        "entries": len(entries),
        "stems": stems,
        "meanStemLength": histogram_mean(hist) if hist else None,
        "histogram": {str(k): v for k, v in hist.items()},
        "groups": groups,
        "positions": singles,
        "ranges": extra,
    }
    if args.emit == "json":
        _emit(args, _dump_json(report))
    else:
        matrix = {**singles, **{k: v["count"] for k, v in groups.items()}, **extra}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"stems={stems}", f"meanStemLength={report['meanStemLength']:.2f}"
                    if hist else "meanStemLength="])
        w.writerow(list(matrix))
        w.writerow(list(matrix.values()))
        _emit(args, buf.getvalue())


def _histogram_from_args(args):
    if args.lexicon:
        return stem_length_histogram(load_lexicon(_need(args.lexicon)))
    hist = {}
    for row in _csv_rows(args.histogram):
        if row[0].strip().lower() in ("length", "x"):
            continue
        try:
            hist[int(row[0])] = float(row[1])
        except (ValueError, IndexError):
            raise MorphoforgeError(f"bad histogram row {row!r}; expected length,count") from None
    return hist


def cmd_fit(args):
    hist = _histogram_from_args(args)
    fit = fit_gaussian(hist)
    from .plots import gaussian_svg
    if args.svg:
        atomic_write_text(args.svg, gaussian_svg(hist, fit))
    if args.emit == "svg":
        _emit(args, gaussian_svg(hist, fit))
    else:
        _emit(args, _dump_json({"fit": fit.to_dict(), "bins": len(hist),
                                "histogram": {str(k): v for k, v in sorted(hist.items())}}))


def cmd_analyze(args):
    config = _config(args)
    img = load_image(_need(args.image))
    acc = AccDictionary.load(_need(args.acc)) if args.acc else AccDictionary()
    gs = index_structure(segment(RawDocument(Path(args.input).name, _read_text(args.input)), acc))
    traces = []
    sentences = []
    for s in gs.sentences:
        sa = analyze_sentence(img, s, acc, config)
        words = []
        wf_by_pos = {wf.position: wf for wf in s.wordforms}
        for pos, res in zip(sa.positions, sa.per_word):
            wf = wf_by_pos[pos]
            words.append({"position": pos, "index": wf.index, "surface": res.surface,
                          "status": res.status.value, "cycles": res.cycles,
                          "readings": [_reading_dict(r) for r in res.readings]})
            if args.trace is not None and res.status.value != "accProvided":
                traced = analyze_word(img, wf.surface, config, keep_trace=True)
                if traced.trace:
                    traces.append(f"# {wf.index} {wf.surface}\n{format_trace(traced.trace)}")
        sentences.append({"index": s.index, "dottedIndex": s.dotted_index,
                          "sentenceCycles": sa.sentence_cycles,
                          "readingsCountBound": sa.readings_count_bound, "words": words})
    if args.trace is not None:
        text = "\n".join(traces) + ("\n" if traces else "")
        if args.trace == "-":
            sys.stderr.write(text)
        else:
            atomic_write_text(args.trace, text)
    if args.emit == "json":
        _emit(args, _dump_json({"docId": gs.doc_id, "blockCount": config.block_count,
                                "sentences": sentences}))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "surface", "status", "cycles", "lemma", "tags", "stemLen", "endingLen"])
        for s in sentences:
            for word in s["words"]:
                rows = word["readings"] or [None]
                for r in rows:
                    w.writerow([word["index"], word["surface"], word["status"], word["cycles"],
                                *( [r["lemma"], ",".join(r["tags"]), r["stemLen"], r["endingLen"]]
                                   if r else ["", "", "", ""])])
        _emit(args, buf.getvalue())


def cmd_bench(args):
    config = _config(args)
    alphabet = _alphabet(args)
    lexicons = []
    if args.lexicon:
        lexicons = [load_lexicon(_need(p)) for p in args.lexicon]
    if args.synthetic:
        try:
            sizes = [int(s) for s in args.synthetic.split(",") if s.strip()]
        except ValueError:
            raise UsageError(f"bad --synthetic list {args.synthetic!r}") from None
        lexicons += [synthetic_lexicon(n, args.seed) for n in sizes]
    if not lexicons:
        raise UsageError("bench needs --lexicon files or --synthetic sizes")
    if args.probes:
        probes = [ln.strip() for ln in _read_text(args.probes).splitlines()
                  if ln.strip() and not ln.startswith("#")]
    else:
        largest = max(lexicons, key=len)
        probes = absent_probes(largest, args.absent, seed=args.seed + 1)
        probes += [e.surface for e in min(lexicons, key=len)[:args.present]]
    report = BenchReport(())
    for entries in lexicons:
        img = compile_lexicon(entries, alphabet, max_word_len=config.max_word_len,
                              max_ending_len=config.max_ending_len, sentinels=config.sentinels)
        report = report + bench(img, entries, probes, config)
    _emit(args, report.to_csv())
    if args.summary:
        atomic_write_text(args.summary, _dump_json({"sizes": report.summary()}))
    if args.svg:
        from .plots import bench_svg
        atomic_write_text(args.svg, bench_svg(report.summary()))


def _read_points(path):
    points = []
    for row in _csv_rows(path):
        if row[0].strip().lower() == "id":
            continue
        if len(row) not in (3, 5):
            raise MorphoforgeError(f"bad point row {row!r}; expected id,T,Q[,Tunit,Qunit]")
        try:
            t, q = float(row[1]), float(row[2])
        except ValueError:
            raise MorphoforgeError(f"bad point row {row!r}") from None
        units = (row[3].strip(), row[4].strip()) if len(row) == 5 else ("", "")
        points.append(RealizationPoint(row[0].strip(), t, q, *units))
    if not points:
        raise MorphoforgeError("no points")
    return points


def _read_weights(path, points, t0, q0):
    c, b, ref = {}, {}, None
    for row in _csv_rows(path):
        key = row[0].strip()
        if key.lower() == "id":
            continue
        try:
            if key.lower() == "reference":
                ref = (float(row[1]), float(row[2]))
            else:
                c[key], b[key] = float(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise MorphoforgeError(f"bad weight row {row!r}; expected id,c,b") from None
    missing = [p.id for p in points if p.id not in c]
    if missing or len(c) != len(points):
        raise MorphoforgeError(f"weights do not match points (missing {missing})")
    ref = ref or (max(p.time for p in points), max(p.hardware for p in points))
    return WeightVector(tuple(c[p.id] for p in points), tuple(b[p.id] for p in points),
                        t0 or ref[0], q0 or ref[1])


def cmd_pareto(args):
    points = _read_points(args.points)
    front = pareto_front(points)
    if args.weights:
        weights = _read_weights(args.weights, points, args.t0, args.q0)
    else:
        t0 = args.t0 or max(p.time for p in points)
        q0 = args.q0 or max(p.hardware for p in points)
        weights = WeightVector.uniform(len(points), t0, q0)
    sel = select_realization(points, weights)
    if args.front_out:
        lines = ["id,T,Q"] + [f"{p.id},{p.time!r},{p.hardware!r}" for p in front]
        atomic_write_text(args.front_out, "\n".join(lines) + "\n")
    if args.svg:
        from .plots import pareto_svg
        atomic_write_text(args.svg, pareto_svg(points, front, sel.id))
    k = set(round(v, 12) for v in sel.k)
    _emit(args, _dump_json({
        "selected": sel.id,
        "F": sel.value,
        "scores": {p.id: s for p, s in zip(points, sel.scores)},
        "front": [p.id for p in front],
        "reference": {"T0": weights.t0, "Q0": weights.q0},
        "kConstant": len(k) == 1,
    }))


def cmd_memcost(args):
    img = load_image(_need(args.image))
    cost = memory_cost(img)
    lines = ["level,component,bits"]
    for i, (name, bits) in enumerate(cost.levels.items(), 1):
        lines.append(f"{i},{name},{bits}")
    lines.append(f"total,all,{cost.total}")
    lines.append(f"ideal,flatTable,{cost.ideal_bits}")
    _emit(args, "\n".join(lines) + "\n")


def cmd_ontometrics(args):
    graphs = [Ontograph.load(_need(p)) for p in args.files]
    rows = [(Path(p).name, metrics(g)) for p, g in zip(args.files, graphs)]
    if args.union:
        rows.append(("union", metrics(concept_union(graphs))))
    if args.emit == "json":
        _emit(args, _dump_json({"graphs": [{"name": n, **m} for n, m in rows]}))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = ["vertices", "edges", "roots", "depth", "W", "Wweighted", "omega"]
        w.writerow(["name", *keys])
        for n, m in rows:
            w.writerow([n, *("" if m[k] is None else m[k] for k in keys)])
        _emit(args, buf.getvalue())


# -- parser ------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="morphoforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        return sp

    sp = add("tokenize", cmd_tokenize, "segment text into indexed sentences (JSON)")
    sp.add_argument("--input", nargs="+", required=True)
    sp.add_argument("--acc")
    sp.add_argument("--output")

    sp = add("lexicon-compile", cmd_compile, "compile a TSV lexicon into a memory image")
    sp.add_argument("--lexicon", required=True)
    sp.add_argument("--alphabet")
    sp.add_argument("--output", required=True)
    sp.add_argument("--max-word-len", type=int, default=32)
    sp.add_argument("--max-ending-len", type=int, default=4)

    sp = add("stats", cmd_stats, "stem statistics and symbol-combination counts")
    sp.add_argument("--lexicon", required=True)
    sp.add_argument("--alphabet")
    sp.add_argument("--ranges", help="extra ranges, e.g. C1-C9,C2-C32")
    sp.add_argument("--max-word-len", type=int, default=32)
    sp.add_argument("--emit", choices=("json", "csv"), default="json")
    sp.add_argument("--output")

    sp = add("fit", cmd_fit, "fit the bell-shaped stem-length model")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--lexicon")
    src.add_argument("--histogram", help="CSV of length,count")
    sp.add_argument("--emit", choices=("json", "svg"), default="json")
    sp.add_argument("--svg", help="also write the plot here")
    sp.add_argument("--output")

    sp = add("analyze", cmd_analyze, "run the processor model over a text")
    sp.add_argument("--image", required=True)
    sp.add_argument("--acc")
    sp.add_argument("--input", required=True)
    sp.add_argument("--config")
    sp.add_argument("--set", action="append", metavar="KEY=VALUE")
    sp.add_argument("--emit", choices=("json", "csv"), default="json")
    sp.add_argument("--trace", nargs="?", const="-", default=None, metavar="FILE")
    sp.add_argument("--output")

    sp = add("bench", cmd_bench, "processor cycles vs linear-scan comparisons")
    sp.add_argument("--lexicon", nargs="+")
    sp.add_argument("--synthetic", help="comma-separated synthetic lexicon sizes")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--alphabet")
    sp.add_argument("--probes")
    sp.add_argument("--absent", type=int, default=50)
    sp.add_argument("--present", type=int, default=50)
    sp.add_argument("--config")
    sp.add_argument("--set", action="append", metavar="KEY=VALUE")
    sp.add_argument("--summary")
    sp.add_argument("--svg")
    sp.add_argument("--output")

    sp = add("pareto", cmd_pareto, "Pareto front and weighted selection")
    sp.add_argument("--points", required=True)
    sp.add_argument("--weights")
    sp.add_argument("--t0", type=float)
    sp.add_argument("--q0", type=float)
    sp.add_argument("--front-out")
    sp.add_argument("--svg")
    sp.add_argument("--output")

    sp = add("memcost", cmd_memcost, "per-level memory cost of an image (CSV)")
    sp.add_argument("--image", required=True)
    sp.add_argument("--output")

    sp = add("ontometrics", cmd_ontometrics, "ontograph complexity metrics")
    sp.add_argument("--files", nargs="+", required=True)
    sp.add_argument("--union", action="store_true")
    sp.add_argument("--metrics", action="store_true", help="accepted for compatibility; metrics are always reported")
    sp.add_argument("--emit", choices=("json", "csv"), default="json")
    sp.add_argument("--output")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError(parser.format_usage().strip())
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (MorphoforgeError, OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # invariant violation inside the library
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
