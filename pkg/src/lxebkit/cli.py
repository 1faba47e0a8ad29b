"""Command-line front end.

Every subcommand is a thin wrapper over the library: the numeric output
equals the corresponding library call bit for bit.  JSON and CSV go to
stdout (exact rationals serialize as "p/q" strings with a float twin),
diagnostics to stderr.  Exit codes: 0 success, 2 usage/validation,
3 feasibility guard, 4 internal check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import numkit, refval, sampler, schur, states, swapexp
from .errors import FeasibilityError

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_CHECK_FAILED = 4


def _emit_json(document: dict) -> None:
    sys.stdout.write(json.dumps(document, indent=2) + "\n")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    header = list(rows[0])
    out = [",".join(header)]
    out.extend(",".join(_csv_cell(row.get(key)) for key in header) for row in rows)
    sys.stdout.write("\n".join(out) + "\n")


def _emit(document: dict, fmt: str) -> None:
    if fmt == "csv":
        row = {**document["config"], **document["result"]}
        flat = {k: v for k, v in row.items() if not isinstance(v, (dict, list))}
        _emit_csv([flat])
    else:
        _emit_json(document)


def _fail(message: str, code: int) -> int:
    print(f"lxebkit: error: {message}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# ref


def _cmd_ref(args) -> int:
    model = args.model
    if model == "bs":
        if args.m is None or args.n is None:
            return _fail("--model bs needs --m and --n", EXIT_USAGE)
        report = refval.lxe_ref_bs(args.m, args.n, exact=args.exact)
    elif model == "bs-lossy":
        if args.m is None or args.n is None or args.ell is None:
            return _fail("--model bs-lossy needs --m, --n and --ell", EXIT_USAGE)
        report = refval.lxe_ref_bs_lossy(args.m, args.n, args.ell)
    elif model == "sbs":
        if args.m is None or args.n is None or args.d is None:
            return _fail("--model sbs needs --m, --n and --d", EXIT_USAGE)
        report = refval.lxe_ref_sbs(args.m, args.n, args.d)
    elif model == "gbs-uniform":
        if args.m is None or args.d is None:
            return _fail("--model gbs-uniform needs --m and --d", EXIT_USAGE)
        if args.pairs is not None:
            pairs = args.pairs
        elif args.n is not None:
            if args.n % 2:
                return _fail("gbs-uniform needs an even --n (or use --pairs)", EXIT_USAGE)
            pairs = args.n // 2
        else:
            return _fail("--model gbs-uniform needs --pairs or an even --n", EXIT_USAGE)
        report = refval.lxe_ref_gbs_uniform(args.m, pairs, args.d)
    else:  # product
        if args.state is None or args.n is None:
            return _fail("--model product needs --state FILE and --n", EXIT_USAGE)
        try:
            with open(args.state, "r", encoding="utf-8") as fh:
                document = fh.read()
        except OSError as exc:
            return _fail(f"cannot read state file: {exc}", EXIT_USAGE)
        rho = states.parse_state_spec(document, default_cutoff=args.n)
        if args.m is not None and args.m != rho.m:
            return _fail(f"--m {args.m} disagrees with state file ({rho.m} modes)", EXIT_USAGE)
        report = refval.lxe_ref_general(rho, args.n, exact=args.exact)
    _emit({"config": _config(args), "result": report.as_dict()}, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# ac


def _cmd_ac(args) -> int:
    model = args.model
    if args.m is None or args.n is None:
        return _fail("ac needs --m and --n", EXIT_USAGE)
    m, n, d = args.m, args.n, args.d
    result: dict = {"model": model, "m": m, "n": n}
    if model == "bs":
        exact = n <= refval.EXACT_N_LIMIT
        score = refval.ac_bs(m, n, exact=exact)
        bound = refval.ac_bs_bound(m, n)
        envelope = refval.ac_bs_envelope(m, n) + 0.15
        result.update(
            ac_exact=str(score) if exact else None,
            ac_score=float(score),
            bound=bound,
            envelope=envelope,
            verdict="pass" if float(score) <= bound else "fail",
        )
    elif model == "sbs":
        if d is None:
            return _fail("--model sbs needs --d", EXIT_USAGE)
        score = refval.ac_sbs(m, n, d)
        result["d"] = d
        if d == m and m >= 3 and n >= 12:
            lower, upper = refval.ac_sbs_bounds(m, n)
            verdict = "pass" if lower <= float(score) <= upper else "fail"
        else:
            lower = upper = None
            verdict = "no-bound"
        result.update(
            ac_exact=str(score), ac_score=float(score),
            bound_lower=lower, bound_upper=upper, verdict=verdict,
        )
    elif model == "gbs":
        if d is None:
            return _fail("--model gbs needs --d", EXIT_USAGE)
        if n % 2:
            return _fail("gbs needs an even --n", EXIT_USAGE)
        score = refval.ac_gbs(m, n, d)
        result["d"] = d
        if d == m and m >= 2:
            lower, upper = refval.ac_gbs_bounds(m, n)
            verdict = "pass" if lower <= float(score) <= upper else "fail"
        else:
            lower = upper = None
            verdict = "no-bound"
        result.update(
            ac_exact=str(score), ac_score=float(score),
            bound_lower=lower, bound_upper=upper, verdict=verdict,
        )
        if d == 1:
            result["single_source_closed_form"] = str(
                refval.ac_gbs_single_source_diag(m, n)
            )
    else:
        return _fail(f"unknown model {model!r}", EXIT_USAGE)
    _emit({"config": _config(args), "result": result}, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# estimate


def _cmd_estimate(args) -> int:
    if args.m is None or args.n is None:
        return _fail("estimate needs --m and --n", EXIT_USAGE)
    report = sampler.lxeb_experiment(
        args.m,
        args.n,
        trials=args.trials,
        samples=args.samples,
        seed=args.seed,
        null_model=args.null,
    )
    _emit({"config": _config(args), "result": report.as_dict()}, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def _mat_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a)))


def oracle_checks(m_max: int, n_max: int, seed: int, inject_fault: bool = False) -> list[dict]:
    """Brute-force verification suite; each entry reports one named check."""
    checks: list[dict] = []

    def record(name: str, passed: bool, detail: str = "") -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    # exact coefficient row sums; the fault switch perturbs one coefficient
    ok, detail = True, ""
    for n in range(1, max(n_max, 6) + 1):
        table = [list(row) for row in schur.c_table(n)]
        if inject_fault and n == 2:
            table[1][1] += Fraction(1, 7)
        for q in range(n + 1):
            plain = sum(table[k][q] for k in range(n + 1))
            signed = sum((-1) ** k * table[k][q] for k in range(n + 1))
            if plain != (1 if q == 0 else 0) or signed != (1 if q == n else 0):
                ok, detail = False, f"n={n}, q={q}"
                break
        if not ok:
            break
    record("coefficient-row-sums", ok, detail)

    # dense-matrix projector laws
    worst = 0.0
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            projectors = [schur.build_projector_matrix(m, n, k) for k in range(n + 1)]
            dim = projectors[0].dim
            eye = np.eye(dim * dim)
            total = sum(p.entries for p in projectors)
            worst = max(worst, _mat_norm(total - eye))
            for k, pk in enumerate(projectors):
                e = pk.entries
                worst = max(worst, _mat_norm(e @ e - e))
                worst = max(worst, _mat_norm(e - e.conj().T))
                worst = max(worst, abs(pk.trace() - float(schur.dim_irrep(m, n, k))))
                for pk2 in projectors[k + 1 :]:
                    worst = max(worst, _mat_norm(e @ pk2.entries))
    record("projector-laws", worst <= 1e-10, f"max deviation {worst:.2e}")

    # swap-operator traces against the closed form
    worst = 0.0
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            for q in range(n + 1):
                sq = schur.build_swap_matrix(m, n, q)
                expected = numkit.factorial(q) * numkit.pochhammer(m, n) ** 2 / (
                    numkit.factorial(n) ** 2 * numkit.pochhammer(m, q)
                )
                worst = max(worst, abs(sq.trace() - float(expected)))
    record("swap-traces", worst <= 1e-8, f"max deviation {worst:.2e}")

    # diagonal Fock expectations against the enumeration formula
    worst = 0.0
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            basis = schur.patterns(m, n)
            for q in range(n + 1):
                sq = schur.build_swap_matrix(m, n, q)
                for i, pattern in enumerate(basis):
                    dim = len(basis)
                    got = sq.entries[i * dim + i, i * dim + i].real
                    worst = max(worst, abs(got - float(schur.trace_S_fock(pattern, q))))
    record("swap-fock-diagonal", worst <= 1e-10, f"max deviation {worst:.2e}")

    # odd blocks annihilate identical pure copies
    ok, detail = True, ""
    for n in range(1, max(n_max, 5) + 1):
        for m in range(1, m_max + 1):
            for pattern in schur.patterns(m, n):
                for k in range(1, n + 1, 2):
                    acc = sum(
                        schur.c_coeff(n, k, q) * schur.trace_S_fock(pattern, q)
                        for q in range(n + 1)
                    )
                    if acc != 0:
                        ok, detail = False, f"k={k}, pattern={pattern}"
    record("odd-block-annihilation", ok, detail)

    # exact uniform-outcome traces against the blockwise closed form
    ok, detail = True, ""
    for m in range(1, m_max + 3):
        for n in range(1, n_max + 3):
            for r in range(n // 2 + 1):
                assembled = sum(
                    schur.c_coeff(n, 2 * r, q) * schur.trace_S_uniform(m, n, q)
                    for q in range(n + 1)
                )
                if assembled != schur.trace_P_uniform(m, n, r):
                    ok, detail = False, f"m={m}, n={n}, r={r}"
    record("uniform-trace-consistency", ok, detail)

    # polynomial pipeline against the dense oracle on random product states
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            for _ in range(3):
                rho = states.ProductState(
                    tuple(states.random_mode(n, rng) for _ in range(m))
                )
                rho_n = states.restrict_to_sector(rho, n)
                for q in range(n + 1):
                    fast = swapexp.swap_expectation(rho, n, q)
                    oracle = schur.build_swap_matrix(m, n, q).expectation(rho_n).real
                    worst = max(worst, abs(fast - oracle))
    record("swap-oracle-equivalence", worst <= 1e-10, f"max deviation {worst:.2e}")

    # combinatorial identity oracles
    for check in numkit.identity_oracles(n_max=max(n_max, 8), trials=10, seed=seed):
        record(
            f"identity-{check.name}",
            check.passed,
            check.first_counterexample or f"{check.cases} cases, {check.skipped} skipped",
        )

    return checks


def _cmd_oracle(args) -> int:
    checks = oracle_checks(args.m, args.n, args.seed, inject_fault=args.inject_fault)
    all_passed = all(c["passed"] for c in checks)
    document = {
        "config": _config(args),
        "result": {"checks": checks, "all_passed": all_passed},
    }
    if args.format == "csv":
        _emit_csv(checks)
    else:
        _emit_json(document)
    for check in checks:
        status = "pass" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']} {check['detail']}".rstrip(), file=sys.stderr)
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# scan


def _scan_bs(args) -> list[dict]:
    ratios = [int(tok) for tok in args.ratio.split(",") if tok]
    rows = []
    for ratio in ratios:
        for n in range(args.n_min, args.n_max + 1):
            m = ratio * n
            value = refval.lxe_ref_bs(m, n, exact=False).value_float
            ac = refval.outcome_count(m, n) * value
            rows.append(
                {
                    "model": "bs",
                    "m": m,
                    "n": n,
                    "ratio": ratio,
                    "value_float": value,
                    "ac": ac,
                    "bound": refval.ac_bs_bound(m, n),
                    "envelope": refval.ac_bs_envelope(m, n) + 0.15,
                }
            )
    return rows


def _scan_gbs_lossy(args) -> list[dict]:
    etas = [float(tok) for tok in args.eta.split(",") if tok]
    rows = []
    for m in range(args.m_min, args.m_max + 1):
        n = m if m % 2 == 0 else m - 1
        if n == 0:
            continue
        size = refval.outcome_count(m, n)
        ideal = refval.lxe_ref_gbs_uniform(m, n // 2, m).value_float
        base = states.squeezed_mode(args.r, n)
        for eta in etas:
            lossy = base if eta >= 1.0 else states.apply_uniform_loss(base, eta)
            rho = states.ProductState((lossy,) * m)
            value = refval.lxe_ref_general(rho, n).value_float
            fidelity = (size * value - 1.0) / (size * ideal - 1.0)
            rows.append(
                {
                    "model": "gbs-lossy",
                    "m": m,
                    "n": n,
                    "eta": eta,
                    "value_float": value,
                    "ideal_value": ideal,
                    "fidelity": fidelity,
                }
            )
    return rows


def _cmd_scan(args) -> int:
    if args.model == "bs":
        rows = _scan_bs(args)
    elif args.model == "gbs-lossy":
        rows = _scan_gbs_lossy(args)
    else:
        return _fail(f"unknown scan model {args.model!r}", EXIT_USAGE)
    _emit_csv(rows)
    if args.plot:
        from . import plotting

        if args.model == "bs":
            plotting.render_bs_scan(rows, args.plot)
        else:
            plotting.render_lossy_scan(rows, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entropy


def _cmd_entropy(args) -> int:
    if args.pattern is not None:
        pattern = tuple(int(tok) for tok in args.pattern.split(",") if tok)
        n = sum(pattern)
        if not 0 <= args.q <= n:
            return _fail(f"need 0 <= q <= {n}", EXIT_USAGE)
        purity = schur.trace_S_fock(pattern, args.q)
        result = {
            "kind": "fock-pattern",
            "pattern": list(pattern),
            "n": n,
            "q": args.q,
            "purity_exact": str(purity),
            "purity_float": float(purity),
            "renyi2_entropy": -math.log(purity),
        }
    else:
        if args.m is None or args.n is None:
            return _fail("entropy needs --pattern or both --m and --n", EXIT_USAGE)
        if not 0 <= args.q <= args.n:
            return _fail(f"need 0 <= q <= {args.n}", EXIT_USAGE)
        purity = schur.trace_S_uniform(args.m, args.n, args.q)
        result = {
            "kind": "uniform-average",
            "m": args.m,
            "n": args.n,
            "q": args.q,
            "avg_purity_exact": str(purity),
            "avg_purity_float": float(purity),
            "entropy_lower_bound": -math.log(purity),
        }
    _emit({"config": _config(args), "result": result}, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# hj


def _cmd_hj(args) -> int:
    if args.n_list:
        ns = [int(tok) for tok in args.n_list.split(",") if tok]
    else:
        ns = list(range(1, args.n_max + 1))
    rows = []
    for n in ns:
        value = refval.hunter_jones_ratio(n)
        rows.append(
            {
                "n": n,
                "ratio_exact": str(value),
                "ratio_float": float(value),
                "gap_to_limit": abs(float(value) - 2.0),
            }
        )
    document = {"config": _config(args), "result": {"rows": rows, "limit": 2.0}}
    if args.format == "csv":
        _emit_csv(rows)
    else:
        _emit_json(document)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser plumbing


def _config(args) -> dict:
    skip = {"func"}
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and value is not None
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lxebkit",
        description=(
            "Reference values, anticoncentration scores and Monte Carlo "
            "benchmarks for photonic sampling experiments."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_ref = sub.add_parser("ref", help="reference LXEB values")
    p_ref.add_argument(
        "--model",
        required=True,
        choices=("bs", "bs-lossy", "sbs", "gbs-uniform", "product"),
    )
    p_ref.add_argument("--m", type=int)
    p_ref.add_argument("--n", type=int)
    p_ref.add_argument("--ell", type=int, help="surviving photons (bs-lossy)")
    p_ref.add_argument("--d", type=int, help="number of squeezed sources")
    p_ref.add_argument("--pairs", type=int, help="photon pairs N, n = 2N (gbs-uniform)")
    p_ref.add_argument("--state", help="JSON state file (product model)")
    p_ref.add_argument("--exact", action="store_true", help="exact rational path")
    add_common(p_ref)
    p_ref.set_defaults(func=_cmd_ref)

    p_ac = sub.add_parser("ac", help="anticoncentration scores and bounds")
    p_ac.add_argument("--model", required=True, choices=("bs", "sbs", "gbs"))
    p_ac.add_argument("--m", type=int)
    p_ac.add_argument("--n", type=int)
    p_ac.add_argument("--d", type=int)
    add_common(p_ac)
    p_ac.set_defaults(func=_cmd_ac)

    p_est = sub.add_parser("estimate", help="Monte Carlo LXEB fidelity")
    p_est.add_argument("--m", type=int)
    p_est.add_argument("--n", type=int)
    p_est.add_argument("--trials", type=int, default=10)
    p_est.add_argument("--samples", type=int, default=1000)
    p_est.add_argument("--seed", type=int, default=0)
    p_est.add_argument("--null", choices=("ideal", "uniform"), default="ideal")
    add_common(p_est)
    p_est.set_defaults(func=_cmd_estimate)

    p_oracle = sub.add_parser("oracle", help="brute-force verification suite")
    p_oracle.add_argument("--m", type=int, default=3)
    p_oracle.add_argument("--n", type=int, default=3)
    p_oracle.add_argument("--seed", type=int, default=20240901)
    p_oracle.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    add_common(p_oracle)
    p_oracle.set_defaults(func=_cmd_oracle)

    p_scan = sub.add_parser("scan", help="grid sweeps as CSV (optional figure)")
    p_scan.add_argument("--model", required=True, choices=("bs", "gbs-lossy"))
    p_scan.add_argument("--ratio", default="2,3,4,6", help="m/n ratios (bs)")
    p_scan.add_argument("--n-min", type=int, default=2)
    p_scan.add_argument("--n-max", type=int, default=100)
    p_scan.add_argument("--eta", default="1.0,0.9,0.75,0.6", help="transmissivities (gbs-lossy)")
    p_scan.add_argument("--m-min", type=int, default=2)
    p_scan.add_argument("--m-max", type=int, default=8)
    p_scan.add_argument("--r", type=float, default=math.asinh(1.0), help="squeezing parameter")
    p_scan.add_argument("--plot", help="render the sweep to this image file")
    p_scan.set_defaults(func=_cmd_scan, format="csv")

    p_ent = sub.add_parser("entropy", help="particle-reduction purity and entropy")
    p_ent.add_argument("--pattern", help="occupation pattern, e.g. 1,1,0")
    p_ent.add_argument("--m", type=int)
    p_ent.add_argument("--n", type=int)
    p_ent.add_argument("--q", type=int, required=True)
    add_common(p_ent)
    p_ent.set_defaults(func=_cmd_entropy)

    p_hj = sub.add_parser("hj", help="Haar permanent moment ratios")
    p_hj.add_argument("--n-max", type=int, default=10)
    p_hj.add_argument("--n-list", help="explicit n values, e.g. 1,2,10")
    add_common(p_hj)
    p_hj.set_defaults(func=_cmd_hj)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FeasibilityError as exc:
        return _fail(str(exc), EXIT_GUARD)
    except (ValueError, states.StateSpecError, swapexp.ZeroNormError) as exc:
        return _fail(str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
