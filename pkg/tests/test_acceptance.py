"""The nine acceptance criteria, each at its stated tolerance and time budget.

Every test records a one-line verdict; ``conftest.py`` prints them after
the run.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import time
import warnings
from fractions import Fraction

import numpy as np

from morphoforge.amp import OracleTable, analyze_word, naive_scan_baseline
from morphoforge.bench import bench
from morphoforge.costmodel import (AlgorithmDescription, OperatorSpec, RealizationPoint, WeightVector,
                                   bram_count, description_complexity, hierarchical_complexity,
                                   ideal_exponent, merge_occurrences, micro_complexity, pareto_front,
                                   relative_complexity, select_realization)
from morphoforge.lexicon import GaussianFit, compile_lexicon, fit_gaussian
from morphoforge.lexicon.image import deserialize, serialize
from morphoforge.lexicon.stats import eval_gaussian, required_data_width
from morphoforge.ontometrics import concept_union, uniform_complexity, uniform_tree, vertex_complexity
from morphoforge.synthetic import absent_probes, synthetic_lexicon
from morphoforge.textmodel import AccDictionary, RawDocument, index_key, index_structure, join, segment

from generators import random_lexicon, random_probes
from oracles import dominance_front, double_sum, exhaustive_select, fold_complexity
from test_costmodel import constructed_merge
from test_ontometrics import random_tree, signature

VERDICTS = {}


def record(n, ok, detail, elapsed, budget):
    within = elapsed < budget
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok and within else 'FAIL'} ({elapsed:.2f}s / {budget}s) {detail}"
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, budget {budget}s"


def test_criterion_1_exact_formula_values():
    t = time.perf_counter()
    got = (required_data_width(26450), bram_count(3, 15), ideal_exponent(32))
    record(1, got == (15, 120, 256), f"width/brams/ideal = {got}", time.perf_counter() - t, 1)


def test_criterion_2_gaussian_machinery():
    t = time.perf_counter()
    printed = GaussianFit(33600.0, 9.0, 16.0)
    peak = eval_gaussian(printed, 9.0)
    xs = np.arange(1, 21, dtype=float)
    fit = fit_gaussian((xs, eval_gaussian(printed, xs)))
    rel = max(abs(fit.amplitude - 33600) / 33600, abs(fit.center - 9) / 9, abs(fit.width - 16) / 16)
    ok = peak == 33600.0 and rel <= 1e-3 and abs(fit.r_squared - 1) <= 1e-9
    record(2, ok, f"peak={peak} max rel err={rel:.2e} R2-1={fit.r_squared - 1:.1e}",
           time.perf_counter() - t, 5)


def test_criterion_3_amp_matches_oracle(small_entries, homonym_entries, synth_2k):
    t = time.perf_counter()
    lexicons = {"small": small_entries, "homonyms": homonym_entries, "synthetic": synth_2k}
    assert any(not e.stem for e in small_entries)                 # ending-only words
    assert any(len(e.surface) == 32 for e in small_entries)       # 32-symbol word
    assert any(len({(e.lemma, e.tags) for e in homonym_entries if e.surface == s}) > 1
               for s in {e.surface for e in homonym_entries})     # homonyms
    mismatches, probes_run = 0, 0
    for k, (name, entries) in enumerate(lexicons.items()):
        img = compile_lexicon(entries)
        oracle = OracleTable(entries, img.alphabet)
        probes = [e.surface for e in entries] + random_probes(100 + k, entries, 1000)
        for w in probes:
            probes_run += 1
            if analyze_word(img, w).reading_set() != oracle.lookup(w).reading_set():
                mismatches += 1
    record(3, mismatches == 0, f"{mismatches} mismatches over {probes_run} probes on {len(lexicons)} lexicons",
           time.perf_counter() - t, 10)


def test_criterion_4_constant_time_contract():
    t = time.perf_counter()
    sizes = (100, 1000, 10000)
    lexicons = {n: synthetic_lexicon(n, seed=0) for n in sizes}
    absent = absent_probes(lexicons[10000], 100, seed=9)
    present = [e.surface for e in lexicons[100][:50]]
    reports = {n: bench(compile_lexicon(lex), lex, absent + present) for n, lex in lexicons.items()}
    cycles = {n: [r.amp_cycles for r in rep.rows] for n, rep in reports.items()}
    flat = cycles[100] == cycles[1000] == cycles[10000]
    scan = {n: sum(naive_scan_baseline(lexicons[n], p)[1] for p in absent) for n in sizes}
    growth = scan[10000] / scan[100]
    medians = [(s["lexiconSize"], s["ampCyclesMedian"], s["scanComparisonsMedian"])
               for rep in reports.values() for s in rep.summary()]
    csv_text = "".join(rep.to_csv() for rep in reports.values())
    assert csv_text.startswith("lexiconSize,probe,found,ampCycles,scanComparisons")
    record(4, flat and growth >= 50, f"cycles identical={flat}, scan growth={growth:.0f}x, medians={medians}",
           time.perf_counter() - t, 30)


def _instance(rng):
    m = rng.randint(1, 12)
    pts = [RealizationPoint(f"r{i}", rng.uniform(0.1, 100), rng.uniform(0.1, 100)) for i in range(m)]
    c = [rng.random() + 1e-3 for _ in range(m)]
    b = [rng.random() + 1e-3 for _ in range(m)]
    c = [x / sum(c) for x in c]
    b = [x / sum(b) for x in b]
    return pts, c, b, rng.uniform(1, 100), rng.uniform(1, 100)


def test_criterion_5_pareto_and_selection():
    t = time.perf_counter()
    rng = random.Random(2024)
    front_bad = select_bad = scale_bad = id_switches = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(500):
            pts, c, b, t0, q0 = _instance(rng)
            if pareto_front(pts) != dominance_front(pts):
                front_bad += 1
            sel = select_realization(pts, WeightVector(c, b, t0, q0))
            if (sel.id, sel.value) != exhaustive_select(pts, c, b, t0, q0):
                select_bad += 1
            # uniform rescaling of every T value, the reference T0 included
            s = rng.uniform(0.01, 100)
            scaled = [RealizationPoint(p.id, p.time * s, p.hardware) for p in pts]
            sel_s = select_realization(scaled, WeightVector(c, b, t0 * s, q0))
            id_switches += sel_s.id != sel.id
            if sel_s.id != sel.id or abs(sel_s.value - sel.value) > 1e-12 * abs(sel.value):
                scale_bad += 1
    ok = front_bad == select_bad == scale_bad == 0
    record(5, ok, f"front mismatches={front_bad}, selection mismatches={select_bad}, "
                  f"T-rescaling violations={scale_bad}/500 (argmin switched in {id_switches})", time.perf_counter() - t, 10)


def test_criterion_6_complexity_calculus():
    t = time.perf_counter()
    rng = random.Random(6)
    bad = 0
    for _ in range(1000):
        ops = [OperatorSpec(f"o{i}", rng.randint(1, 64), rng.randint(1, 40), rng.randint(0, 3))
               for i in range(rng.randint(1, 10))]
        alg = AlgorithmDescription.from_ops(ops)
        per, total = hierarchical_complexity(alg)
        bad += description_complexity(ops) != fold_complexity(ops)
        bad += total != double_sum(alg.per_level)
        for level in per:
            below = sum(fold_complexity(alg.per_level[j]) for j in alg.per_level if j < level)
            if below:
                bad += relative_complexity(alg, level) != Fraction(fold_complexity(alg.per_level[level]), below)
        micro = [rng.randint(0, 500) for _ in range(rng.randint(1, 8))]
        bad += micro_complexity(micro) != sum(micro)
    merges = 0
    while merges < 1000:
        case = constructed_merge(rng)
        if case is None:
            continue
        ops, take, composite = case
        bad += not description_complexity(merge_occurrences(ops, take, composite)) < description_complexity(ops)
        merges += 1
    record(6, bad == 0, f"{bad} mismatches over 1000 specs and {merges} merges", time.perf_counter() - t, 5)


def test_criterion_7_ontometrics():
    t = time.perf_counter()
    bad = sum(uniform_complexity(s, h) != vertex_complexity(uniform_tree(s, h))
              for s in range(1, 5) for h in range(1, 7))
    rng = random.Random(7)
    algebra_bad = 0
    for _ in range(200):
        g, h, k = (random_tree(rng.randrange(10 ** 6)) for _ in range(3))
        algebra_bad += signature(concept_union([g, g])) != signature(g)
        algebra_bad += signature(concept_union([g, h])) != signature(concept_union([h, g]))
        algebra_bad += (signature(concept_union([concept_union([g, h]), k]))
                        != signature(concept_union([g, concept_union([h, k])])))
    record(7, bad == algebra_bad == 0, f"uniform mismatches={bad}/24, union law violations={algebra_bad}",
           time.perf_counter() - t, 5)


def _random_text(rng):
    pools = ["абвгґдеєжзиіїйклмнопрстуфхцчшщьюяАБВГҐДЕЄЖ", " \n\t", ".,!?…'’-", "0123456789",
             "т.д. ", "США ", "abcXYZ", "́  😀中文"]
    out = []
    for _ in range(rng.randint(0, 80)):
        if rng.random() < 0.1:
            out.append(chr(rng.choice([rng.randint(0x20, 0xD7FF), rng.randint(0xE000, 0x10FFFF)])))
        else:
            out.append(rng.choice(rng.choice(pools)))
    return "".join(out)


def test_criterion_8_graphematic_losslessness(fixtures):
    t = time.perf_counter()
    acc = AccDictionary.load(fixtures / "acc.tsv")
    rng = random.Random(8)
    texts = [_random_text(rng) for _ in range(1000)]
    texts += [(fixtures / "sample_uk.txt").read_text("utf-8"),
              "Книги, журнали і т.д. Потім США.", "т.д.т.д. США-США", ""]
    lossy = disordered = 0
    for text in texts:
        gs = index_structure(segment(RawDocument("d", text), acc))
        lossy += join(gs) != text
        keys = [index_key(wf.index) for wf in gs.wordforms()]
        disordered += keys != sorted(keys)
    record(8, lossy == disordered == 0, f"lossy={lossy}, misordered={disordered} over {len(texts)} texts",
           time.perf_counter() - t, 10)


def test_criterion_9_image_round_trip():
    t = time.perf_counter()
    rng = random.Random(9)
    bad = 0
    for i in range(100):
        img = compile_lexicon(random_lexicon(rng.randrange(10 ** 6), n=rng.randint(1, 80)))
        data = serialize(img)
        back = deserialize(data)
        bad += back != img or serialize(back) != data
    record(9, bad == 0, f"{bad}/100 images differ after round trip", time.perf_counter() - t, 5)
