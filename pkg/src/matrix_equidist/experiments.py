"""Reproducible verification suites.

Each function returns a JSON-ready report (see :mod:`matrix_equidist.report`)
whose verdicts are exact identities, exact inequalities, or comparisons
against a recorded golden run.  Apart from the ``wall_clock_s`` field, a
report depends only on its parameters and seed, never on the worker count.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _batch
from .charsum import evaluate_counts, form_histograms, hyper_kloosterman
from .discrepancy import empirical_box_error, etk_bound, etk_report, default_H
from .embed import Embedding, units_numerators
from .errors import CombinatorialBlowup, ConditionViolated, DimensionMismatch
from .fp import FpMatrix, check_prime
from .groups import GroupKind, order
from .region import Box, RegionUnion, count_image_many, count_units_image, slab
from .report import make_report, verdict

RNG_ALGORITHM = "numpy.random.PCG64 seeded with default_rng([seed, p]); rejection sampling"
SL2_DEFAULT_H = (1, 0, 0, 0, 0, 0, 0, -1)
PRESET_SEED = 20240917
GOLDEN_RTOL = 1e-9
SLACK = 1e-9


def _frac_json(f: Fraction) -> list:
    return [f.numerator, f.denominator]


def _aux_entries(aux):
    """Raw integer entries of C, so that it can be reduced afresh at each p."""
    if aux is None:
        return None
    if isinstance(aux, FpMatrix):
        return [list(r) for r in aux.entries]
    return np.asarray(aux, dtype=np.int64).tolist()


# --------------------------------------------------------------------------
# equidistribution scans


def classical_etk(modulus: int, H: int) -> float:
    """ETK bound for the points f_m(x), x a unit mod m, at cutoff H."""
    pts = units_numerators(modulus)
    N = pts.shape[0]

    def mag(h):
        phase = (h[0] * pts[:, 0] + h[1] * pts[:, 1]) % modulus
        counts = np.bincount(phase, minlength=modulus)
        return abs(complex(evaluate_counts(counts, modulus))) / N

    return etk_bound(H, 2, N, mag).bound


def theorem_scan(embedding, n: int, p_list: Sequence[int], region, aux=None, *,
                 H: int | None = None, etk: bool = True, threads: int | None = None) -> dict:
    """Count image points in ``region`` for each p and compare with its area.

    ``embedding`` is one of g, h, s, gt, or f for the classical map on units
    mod m (then ``p_list`` holds the moduli and ``n`` is ignored).
    """
    t0 = time.perf_counter()
    aux = _aux_entries(aux)
    classical = str(embedding).lower() == "f"
    region = RegionUnion.of(region)
    k = 2 if classical else Embedding.parse(embedding).dim(n)
    if region.k != k:
        raise DimensionMismatch(f"region dimension {region.k} != embedding dimension {k}")
    a = region.area()
    records = []
    for p in p_list:
        if classical:
            N = units_numerators(p).shape[0]
            count = count_units_image(p, region)
            h_used = H or 1
        else:
            emb = Embedding.parse(embedding)
            kind = emb.default_kind()
            N = order(kind, n, check_prime(p))
            count = int(count_image_many(kind, n, p, emb, [region], aux=aux, threads=threads)[0])
            h_used = H or default_H(n, p)
        err = abs(Fraction(count, N) - a)
        rec = {"p": p, "N": N, "count": count, "area": _frac_json(a), "error": _frac_json(err),
               "error_value": float(err), "H": h_used}
        if etk:
            try:
                if classical:
                    bound = classical_etk(p, h_used)
                else:
                    bound = etk_report(kind, n, p, emb, h_used, aux, threads=threads).bound
                rec["etk_bound"] = bound
                rec["dominated"] = float(err) <= bound + SLACK
            except CombinatorialBlowup as exc:
                rec["etk_bound"] = None
                rec["etk_skipped"] = str(exc)
        records.append(rec)

    errs = [Fraction(*r["error"]) for r in records]
    strictly = all(x > y for x, y in zip(errs, errs[1:]))
    all_zero = all(e == 0 for e in errs)
    # the classical map is only expected to tend to zero, not monotonically
    verdicts = [verdict("error_decay", None if classical and not (strictly or all_zero) else strictly or all_zero,
                        "strictly decreasing" if strictly else ("identically zero" if all_zero else
                                                                "not strictly decreasing"))]
    checked = [r for r in records if r.get("etk_bound") is not None]
    if etk:
        verdicts.append(verdict("etk_domination", all(r["dominated"] for r in checked) if checked else None,
                                f"{len(checked)} of {len(records)} primes checked"))
    # least-squares fit error ~ C * p^(-1/(2(k+1)))
    alpha = 1.0 / (2 * (k + 1))
    w = [p ** -alpha for p in p_list]
    ev = [r["error_value"] for r in records]
    denom = math.fsum(x * x for x in w)
    fit_c = math.fsum(e * x for e, x in zip(ev, w)) / denom if denom else 0.0
    params = {"embedding": str(embedding).lower() if classical else Embedding.parse(embedding).value,
              "n": None if classical else n, "p_list": list(p_list), "region": region.to_json(),
              "aux": aux, "H": H, "decay_exponent": alpha, "fit_constant": fit_c}
    return make_report("theorem_scan", params, records, verdicts, time.perf_counter() - t0)


def decay_region(k: int) -> Box:
    """[0,1/2)^2 x [0,1)^(k-2)."""
    return slab(k, (0, 0), (Fraction(1, 2), Fraction(1, 2)))


# --------------------------------------------------------------------------
# the SL_2 counterexample


def sl2_conditions(h: Sequence[int]) -> list[tuple[str, int]]:
    """The four linear forms that must vanish (h listed in the g flattening order)."""
    h11, h12, h13, h14, h21, h22, h23, h24 = h
    return [("h11+h24", h11 + h24), ("h12-h14", h12 - h14),
            ("h13+h22", h13 + h22), ("h21-h23", h21 - h23)]


def sl2_counterexample(p: int, h: Sequence[int] = SL2_DEFAULT_H, *, allow_violation: bool = False,
                       threads: int | None = None) -> dict:
    """Histogram of h . g_p(X) over SL_2(F_p), showing the image is not equidistributed."""
    t0 = time.perf_counter()
    p = check_prime(p)
    h = tuple(int(x) for x in h)
    if len(h) != 8:
        raise DimensionMismatch("h must have 8 entries")
    if not any(h):
        raise ValueError("h must be nonzero")
    conds = sl2_conditions(h)
    satisfied = all(v == 0 for _, v in conds)
    if not satisfied and not allow_violation:
        bad = ", ".join(f"{name}={v}" for name, v in conds if v)
        raise ConditionViolated(f"h violates {bad}")
    u = FpMatrix(((h[0], h[1]), (h[4], h[5])), p)
    v = FpMatrix(((h[2], h[3]), (h[6], h[7])), p)
    counts = form_histograms(GroupKind.SL, 2, p, [u], [v], threads=threads)[0]
    N = order(GroupKind.SL, 2, p)
    value = complex(evaluate_counts(counts, p))
    normalized = Fraction(int(counts[0]), N) if satisfied else None
    # integral over [0,1]^8 of e(h.x) factors; a nonzero integer h_i gives 0
    integral = 0 if any(h) else 1
    record = {"p": p, "h": list(h), "order": N, "counts": counts.tolist(), "total": int(counts.sum()),
              "sum": {"re": value.real, "im": value.imag},
              "normalized_sum": _frac_json(normalized) if normalized is not None else None,
              "integral": integral}
    if satisfied:
        verdicts = [
            verdict("conditions", True),
            verdict("concentrated_at_zero", int(counts[0]) == N and not counts[1:].any(),
                    f"counts[0]={int(counts[0])}, order={N}"),
            verdict("normalized_sum_is_one", normalized == 1),
            verdict("differs_from_integral", normalized != integral),
        ]
    else:
        verdicts = [verdict("conditions", None, "h violates the conditions; sum reported only")]
    return make_report("sl2_counterexample", {"p": p, "h": list(h)}, [record], verdicts,
                       time.perf_counter() - t0)


# --------------------------------------------------------------------------
# lemma bound suites

LEMMAS = {
    # name: (series, exponent(n))
    "L1": (("K_GL",), lambda n: n * n - 0.5),
    "L2": (("S_Z",), lambda n: n * n - 2.5),
    "L3": (("S_GL",), lambda n: n * n - 2.5),
    "L4": (("S_SL",), lambda n: n * n - 2),
    "R2": (("S_SL", "S_GL"), lambda n: n * n - n),
    "S4": (("K_SL",), lambda n: n * n - 2),
}


def _draw_nonzero(rng, n, p):
    while True:
        m = rng.integers(0, p, size=n * n)
        if m.any():
            return m


def _draw_pair(rng, n, p):
    while True:
        u = rng.integers(0, p, size=n * n)
        v = rng.integers(0, p, size=n * n)
        if u.any() or v.any():
            return u, v


def _draw_invertible(rng, n, p):
    while True:
        m = rng.integers(0, p, size=n * n)
        det, _ = _batch.det_inv(m.reshape(1, n, n), p, want_inverse=False)
        if det[0]:
            return m


def sample_inputs(lemma: str, n: int, p: int, samples: int, seed: int) -> dict:
    """Seeded random inputs for one lemma at one prime."""
    rng = np.random.default_rng([seed, p])
    if lemma in ("L1", "S4"):
        pairs = [_draw_pair(rng, n, p) for _ in range(samples)]
        out = {"U": np.array([a for a, _ in pairs]).reshape(-1, n * n),
               "V": np.array([b for _, b in pairs]).reshape(-1, n * n)}
        if lemma == "L1":
            out["M"] = np.array([_draw_invertible(rng, n, p) for _ in range(samples)]).reshape(-1, n * n)
        return out
    return {"U": np.array([_draw_nonzero(rng, n, p) for _ in range(samples)]).reshape(-1, n * n)}


def _values(counts: np.ndarray, p: int) -> np.ndarray:
    return np.abs(evaluate_counts(counts, p))


def verify_lemma_bounds(lemma: str, n: int, p_list: Sequence[int], samples: int = 50, seed: int = 0, *,
                        golden: dict | None = None, threads: int | None = None) -> dict:
    """Normalised maxima |sum| / p^e over seeded samples, per prime.

    L1 at n = 1 is exhaustive over all u, v in F_p^* and checks the Weil
    bound |K(u, v; p)| <= 2 sqrt(p).  L3 also checks, for each sample, the
    integer identity counts_Z[z] + counts_GL[z] = p^(n^2 - 1).
    """
    t0 = time.perf_counter()
    lemma = lemma.upper()
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma!r}; expected one of {sorted(LEMMAS)}")
    if lemma == "S4" and n < 3:
        raise ValueError("the SL_n Kloosterman bound is stated for n >= 3")
    series_names, exponent = LEMMAS[lemma]
    e = exponent(n)
    records, verdicts = [], []
    identity_ok, weil_ok = True, True
    for p in p_list:
        p = check_prime(p)
        scale = float(p) ** e
        exhaustive = lemma == "L1" and n == 1
        if exhaustive:
            uv = np.array([(u, v) for u in range(1, p) for v in range(1, p)], dtype=np.int64)
            ins = {"U": uv[:, :1], "V": uv[:, 1:], "M": np.ones((uv.shape[0], 1), dtype=np.int64)}
        else:
            ins = sample_inputs(lemma, n, p, samples, seed)
        per_series = {}
        if lemma == "L1":
            mt = ins["M"].reshape(-1, n, n).transpose(0, 2, 1)
            v_eff = _batch.matmul(mt, ins["V"].reshape(-1, n, n), p).reshape(-1, n * n)
            per_series["K_GL"] = _values(form_histograms("gl", n, p, ins["U"], v_eff, threads=threads), p)
        elif lemma == "S4":
            per_series["K_SL"] = _values(form_histograms("sl", n, p, ins["U"], ins["V"], threads=threads), p)
        else:
            hist = {}
            for name in set(series_names) | ({"S_Z", "S_GL"} if lemma == "L3" else set()):
                kind = {"S_Z": "z", "S_GL": "gl", "S_SL": "sl"}[name]
                hist[name] = form_histograms(kind, n, p, ins["U"], threads=threads)
            if lemma == "L3":
                target = p ** (n * n - 1)
                identity_ok &= bool(((hist["S_Z"] + hist["S_GL"]) == target).all())
            for name in series_names:
                per_series[name] = _values(hist[name], p)
        for name in series_names:
            vals = per_series[name]
            rec = {"series": name, "p": p, "exponent": e, "samples": int(vals.size),
                   "max_abs": float(vals.max()), "max_ratio": float(vals.max() / scale),
                   "ratios": (vals / scale).tolist()}
            if exhaustive:
                rec["weil_bound"] = 2 * math.sqrt(p)
                weil_ok &= bool(vals.max() <= 2 * math.sqrt(p) + SLACK)
            records.append(rec)

    if lemma == "L3":
        verdicts.append(verdict("cancellation_identity", identity_ok,
                                "counts_Z + counts_GL == p^(n^2-1) for every residue and sample"))
    if lemma == "L1" and n == 1:
        verdicts.append(verdict("weil_bound", weil_ok, "|K(u,v;p)| <= 2 sqrt(p) for all u, v != 0"))
    for name in series_names:
        seq = [r for r in records if r["series"] == name]
        growth = seq[-1]["max_ratio"] / seq[0]["max_ratio"] if seq[0]["max_ratio"] else math.inf
        g = (golden or {}).get("series", {}).get(name)
        if g is None:
            verdicts.append(verdict(f"{name}_trend", None, f"growth {growth!r}; no golden run supplied"))
            continue
        same_p = g["p"] == [r["p"] for r in seq]
        close = same_p and all(math.isclose(r["max_ratio"], gv, rel_tol=GOLDEN_RTOL, abs_tol=GOLDEN_RTOL)
                               for r, gv in zip(seq, g["max_ratio"]))
        verdicts.append(verdict(f"{name}_matches_golden", close))
        verdicts.append(verdict(f"{name}_growth", growth <= g["growth_factor"] + GOLDEN_RTOL,
                                f"growth {growth!r} vs recorded {g['growth_factor']!r}"))
    params = {"lemma": lemma, "n": n, "p_list": list(p_list), "samples": samples, "seed": seed,
              "exponent": e, "rng": RNG_ALGORITHM}
    return make_report("verify_lemma_bounds", params, records, verdicts, time.perf_counter() - t0)


def golden_from_report(report: dict) -> dict:
    """The golden record (per-series maxima and growth factor) of a lemma report."""
    out = {"lemma": report["parameters"]["lemma"], "n": report["parameters"]["n"],
           "samples": report["parameters"]["samples"], "seed": report["parameters"]["seed"], "series": {}}
    for r in report["records"]:
        s = out["series"].setdefault(r["series"], {"p": [], "max_ratio": []})
        s["p"].append(r["p"])
        s["max_ratio"].append(r["max_ratio"])
    for s in out["series"].values():
        s["growth_factor"] = s["max_ratio"][-1] / s["max_ratio"][0]
    return out


def plot_rows(report: dict, series: str | None = None) -> list[tuple]:
    """(p, value) rows for a report: max ratios of a lemma suite, ETK bounds, or scan errors."""
    rows = []
    for r in report["records"]:
        if series is not None and r.get("series") != series:
            continue
        if "max_ratio" in r:
            rows.append((r["p"], r["max_ratio"]))
        elif "etk_bound" in r and r["etk_bound"] is not None and report["name"] == "etk_check":
            rows.append((r["p"], r["etk_bound"]))
        elif "error_value" in r:
            rows.append((r["p"], r["error_value"]))
    return rows


def hyper_kloosterman_scan(n_list: Sequence[int], p_list: Sequence[int]) -> dict:
    """|Kl_n(a; p)| against n p^((n-1)/2) for every all-nonzero a with a_1 = 1.

    The constant n is asserted only for n <= 2, where it is the sharp
    constant 2 of the Weil bound; larger n are reported.
    """
    t0 = time.perf_counter()
    records, verdicts = [], []
    for n in n_list:
        worst_ratio, violations = 0.0, 0
        for p in p_list:
            bound = n * p ** ((n - 1) / 2)
            # Kl_n(a) depends only on the product of the a_i, so a_1 = 1 loses nothing
            for rest in np.ndindex(*([p - 1] * (n - 1))):
                a = (1,) + tuple(int(x) + 1 for x in rest)
                val = abs(hyper_kloosterman(a, p))
                worst_ratio = max(worst_ratio, val / p ** ((n - 1) / 2))
                violations += val > bound + SLACK
        records.append({"n": n, "p_list": list(p_list), "max_ratio": worst_ratio, "violations": int(violations)})
        verdicts.append(verdict(f"deligne_n{n}", violations == 0 if n <= 2 else None,
                                f"max |Kl|/p^((n-1)/2) = {worst_ratio!r}, {violations} above {n}"))
    return make_report("hyper_kloosterman_scan", {"n_list": list(n_list), "p_list": list(p_list)},
                       records, verdicts, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# ETK domination over box families


def preset_boxes(k: int, count: int = 50, seed: int = PRESET_SEED) -> list[Box]:
    """A deterministic family of boxes in [0,1)^k with small-denominator corners."""
    boxes = [Box.cube(k), Box((0,) * k, (0,) + (1,) * (k - 1)), Box.cube(k, Fraction(1, 2)),
             decay_region(k), slab(k, (Fraction(1, 2),), (1,))]
    rng = np.random.default_rng(seed)
    dens = (2, 3, 4, 5, 6, 8)
    while len(boxes) < count:
        lo, hi = [], []
        for _ in range(k):
            if rng.random() < 0.5:
                lo.append(Fraction(0))
                hi.append(Fraction(1))
                continue
            d = int(rng.choice(dens))
            a, b = sorted(rng.choice(d + 1, size=2, replace=False).tolist())
            lo.append(Fraction(a, d))
            hi.append(Fraction(b, d))
        boxes.append(Box(tuple(lo), tuple(hi)))
    return boxes[:count]


def etk_check(n: int, p_list: Sequence[int], embedding, H: int, boxes: Sequence | None = None,
              aux=None, *, kind=None, threads: int | None = None) -> dict:
    """Every empirical box error must be at most the ETK bound at the same p."""
    t0 = time.perf_counter()
    aux = _aux_entries(aux)
    emb = Embedding.parse(embedding)
    kind = emb.check_kind(kind or emb.default_kind())
    k = emb.dim(n)
    boxes = list(boxes) if boxes is not None else preset_boxes(k)
    records, ok = [], True
    for p in p_list:
        rep = etk_report(kind, n, p, emb, H, aux, threads=threads)
        errs = empirical_box_error(kind, n, p, emb, boxes, aux, threads=threads)
        worst = max(e.value for e in errs)
        dominated = all(e.value <= rep.bound + SLACK for e in errs)
        ok &= dominated
        records.append({"p": p, "H": H, "etk": rep.to_json(), "etk_bound": rep.bound,
                        "max_box_error": worst, "dominated": dominated,
                        "box_errors": [[e.count, _frac_json(e.error)] for e in errs]})
    params = {"n": n, "p_list": list(p_list), "embedding": emb.value, "kind": kind.value, "H": H,
              "boxes": len(boxes), "aux": aux}
    return make_report("etk_check", params, records,
                       [verdict("etk_domination", ok, f"{len(boxes)} boxes x {len(p_list)} primes")],
                       time.perf_counter() - t0)


def order_check(cases: Sequence[tuple[int, int]], *, threads: int | None = None) -> dict:
    """Closed-form orders against exhaustive filter counts."""
    from .groups import count_members

    t0 = time.perf_counter()
    records, ok = [], True
    for n, p in cases:
        for kind in GroupKind:
            formula = order(kind, n, p)
            counted = count_members(kind, n, p, threads=threads)
            ok &= formula == counted
            records.append({"n": n, "p": p, "kind": kind.value, "formula": formula, "enumerated": counted})
    return make_report("order_check", {"cases": [list(c) for c in cases]}, records,
                       [verdict("orders_match", ok)], time.perf_counter() - t0)
