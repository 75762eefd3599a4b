"""Command-line harness: verification batteries, samplers, closed-form vs
matrix-power cross-checks, matrix dumps, Bailey iteration, and series dumps.

All rationals cross this boundary as "p/q" strings.  Reports are JSON lines
on stdout; diagnostics go to stderr.  Exit codes: 0 all checks pass, 1 a
mathematical check failed, 2 usage or configuration error.
"""

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter

from qchains.fristedt import (
    FristedtParams,
    f_chain_mass,
    f_diagonalization,
    f_kernel,
    f_kernel_matrix,
    f_kr_closed,
    f_sample_stream,
)
from qchains.glchain import (
    TruncatedMatrix,
    build_diagonalization,
    chain_mass,
    kernel,
    kernel_matrix,
    kr_closed,
    sample_stream,
)
from qchains.identities import (
    AGSpec,
    absorption_limit_series,
    ag_product,
    ag_sum,
    bailey_check,
    bailey_pair_from_alpha,
    bailey_step,
    unit_bailey_pair,
)
from qchains.partitions import MeasureParams, enumerate_partitions, mass_v1, mass_v2
from qchains.qalgebra import (
    QSeries,
    euler_poch,
    jacobi_product,
    one_minus_product,
    q_binomial_check,
    theta_sum,
)
from qchains.quiver import (
    ConvergenceError,
    Quiver,
    QuiverParams,
    load_quiver,
    quiver_first_cols,
    quiver_kernel,
    quiver_m_entry,
    quiver_sample,
)


@dataclass(frozen=True)
class RunConfig:
    """Validated common options; parsing failures surface before any math."""

    u: Fraction
    q: Fraction
    order: int
    l_max: int
    eps: Fraction
    seed: int
    mode: str

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        u = Fraction(getattr(args, "u", None) or "1/2")
        q = Fraction(getattr(args, "q", None) or "2")
        eps = Fraction(getattr(args, "eps", None) or Fraction(1, 2**20))
        order = getattr(args, "order", None)
        l_max = getattr(args, "lmax", None)
        seed = getattr(args, "seed", None)
        mode = getattr(args, "format", "json")
        cfg = cls(
            u=u,
            q=q,
            order=-1 if order is None else int(order),
            l_max=-1 if l_max is None else int(l_max),
            eps=eps,
            seed=0 if seed is None else int(seed),
            mode=mode,
        )
        if cfg.eps <= 0:
            raise ValueError("eps must be positive")
        return cfg

    def measure_params(self) -> MeasureParams:
        return MeasureParams(u=self.u, q=self.q)

    def fristedt_params(self) -> FristedtParams:
        return FristedtParams(q=self.q)


def _emit(obj, mode="json"):
    if mode == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(" ".join(f"{k}={v}" for k, v in sorted(obj.items())))


# ---------------------------------------------------------------------------
# Verification cases (top-level functions so a worker pool can pickle them)


def _case_ag(k, i, order, inject=False):
    t0 = perf_counter()
    spec = AGSpec(k, i, order)
    lhs = ag_sum(spec)
    rhs = ag_product(spec)
    if inject:
        coeffs = list(lhs.coeffs)
        coeffs[min(3, order)] += 1
        lhs = QSeries(coeffs, order=order)
    mismatch = next(
        (e for e in range(order + 1) if lhs.coeffs[e] != rhs.coeffs[e]), None
    )
    report = {
        "suite": "ag",
        "k": k,
        "i": i,
        "N": order,
        "coverage": "probabilistic" if i in (1, k) else "series-engine",
        "status": "pass" if mismatch is None else "fail",
        "elapsed": round(perf_counter() - t0, 6),
    }
    if mismatch is not None:
        report["first_mismatch_order"] = mismatch
    return report


def _case_pipeline(k, order):
    t0 = perf_counter()
    failures = []
    flat = absorption_limit_series(k, 0, order)
    if flat != euler_poch(order, order) * ag_sum(AGSpec(k, k, order)):
        failures.append("absorption-vs-sum-side-top")
    tilted = absorption_limit_series(k, 1, order)
    if tilted != one_minus_product(range(2, order + 1), order) * ag_sum(
        AGSpec(k, 1, order)
    ):
        failures.append("absorption-vs-sum-side-bottom")
    in_y = flat.to_y()
    theta = theta_sum(2 * k + 1, 1, 2 * order)
    if in_y != theta:
        failures.append("theta-route")
    if theta != jacobi_product(1, 2 * k + 1, 2 * order):
        failures.append("triple-product")
    return {
        "suite": "pipeline",
        "k": k,
        "N": order,
        "status": "pass" if not failures else "fail",
        "failures": failures,
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_qbinomial(n, q):
    t0 = perf_counter()
    ok = q_binomial_check(n, Fraction(q))
    return {
        "suite": "qbinomial",
        "n": n,
        "q": q,
        "status": "pass" if ok else "fail",
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_jacobi(a, b, order):
    t0 = perf_counter()
    ok = theta_sum(a, b, order) == jacobi_product(b, a, order)
    return {
        "suite": "jacobi",
        "A": a,
        "B": b,
        "N": order,
        "status": "pass" if ok else "fail",
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_diag(u, q, l_max):
    t0 = perf_counter()
    p = MeasureParams(u=Fraction(u), q=Fraction(q))
    d = build_diagonalization(l_max, p)
    failures = []
    if d.a @ d.a_inv != TruncatedMatrix.identity(l_max + 1):
        failures.append("A*Ainv")
    if d.m @ d.a != d.a @ d.e:
        failures.append("M*A=A*E")
    if d.kernel_matrix() != kernel_matrix(l_max, p):
        failures.append("K=CMC^-1")
    return {
        "suite": "diag",
        "u": u,
        "q": q,
        "l_max": l_max,
        "status": "pass" if not failures else "fail",
        "failures": failures,
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_power_battery(u, q, l_max, r_max):
    t0 = perf_counter()
    p = MeasureParams(u=Fraction(u), q=Fraction(q))
    mat = kernel_matrix(l_max, p)
    power = TruncatedMatrix.identity(l_max + 1)
    bad = None
    for r in range(1, r_max + 1):
        power = power @ mat
        for ll in range(l_max + 1):
            for j in range(ll + 1):
                if kr_closed(ll, j, r, p) != power.entry(ll, j):
                    bad = (ll, j, r)
    return {
        "suite": "power",
        "u": u,
        "q": q,
        "l_max": l_max,
        "r_max": r_max,
        "status": "pass" if bad is None else "fail",
        "first_mismatch": bad,
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_stochastic(model, u, q, a_max):
    t0 = perf_counter()
    if model == "gl":
        p = MeasureParams(u=Fraction(u), q=Fraction(q))
        ok = all(
            sum(kernel(a, b, p) for b in range(a + 1)) == 1 for a in range(a_max + 1)
        )
    else:
        fp = FristedtParams(q=Fraction(q))
        ok = all(
            sum(f_kernel(a, b, fp) for b in range(a + 1)) == 1
            for a in range(a_max + 1)
        )
    return {
        "suite": "stochastic",
        "model": model,
        "q": q,
        "a_max": a_max,
        "status": "pass" if ok else "fail",
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_chain_measure(u, q, size):
    t0 = perf_counter()
    p = MeasureParams(u=Fraction(u), q=Fraction(q))
    lams = [lam for n in range(size + 1) for lam in enumerate_partitions(n)]
    base = lams[0]
    cb, wb = chain_mass(base, p), mass_v1(base, p)
    ok = all(
        chain_mass(lam, p) * wb == mass_v1(lam, p) * cb
        and mass_v1(lam, p) == mass_v2(lam, p)
        for lam in lams
    )
    return {
        "suite": "chain-measure",
        "u": u,
        "q": q,
        "size": size,
        "status": "pass" if ok else "fail",
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_bailey(u, q, l_max, seed, count):
    t0 = perf_counter()
    import random

    p = MeasureParams(u=Fraction(u), q=Fraction(q))
    diag = build_diagonalization(l_max, p)
    failures = []

    def exercise(pair, label):
        stepped = bailey_step(pair)
        if not bailey_check(stepped):
            failures.append(f"{label}:step")
        if stepped.beta != diag.m.mul_vector(pair.beta):
            failures.append(f"{label}:beta'=M*beta")
        if stepped.beta != diag.a.mul_vector(stepped.alpha):
            failures.append(f"{label}:M*beta=A*alpha'")

    exercise(unit_bailey_pair(p, l_max), "unit")
    rng = random.Random(seed)
    for t in range(count):
        alpha = [
            Fraction(rng.randint(-50, 50), rng.randint(1, 20))
            for _ in range(l_max + 1)
        ]
        exercise(bailey_pair_from_alpha(alpha, p), f"random{t}")
    return {
        "suite": "bailey",
        "u": u,
        "q": q,
        "l_max": l_max,
        "pairs": count + 1,
        "status": "pass" if not failures else "fail",
        "failures": failures[:5],
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_fristedt(q, l_max, r_max, size):
    t0 = perf_counter()
    fp = FristedtParams(q=Fraction(q))
    failures = []
    mat = f_kernel_matrix(l_max, fp)
    power = TruncatedMatrix.identity(l_max + 1)
    for r in range(1, r_max + 1):
        power = power @ mat
        for ll in range(l_max + 1):
            for j in range(ll + 1):
                if f_kr_closed(ll, j, r, fp) != power.entry(ll, j):
                    failures.append(f"power({ll},{j},{r})")
    d = f_diagonalization(l_max, fp)
    if d.a @ d.a_inv != TruncatedMatrix.identity(l_max + 1):
        failures.append("A*Ainv")
    if d.m @ d.a != d.a @ d.e:
        failures.append("M*A=A*D")
    for n in range(size + 1):
        for lam in enumerate_partitions(n):
            if f_chain_mass(lam, fp) != fp.q**n:
                failures.append(f"uniformity:{list(lam.parts)}")
    return {
        "suite": "fristedt",
        "q": q,
        "l_max": l_max,
        "r_max": r_max,
        "status": "pass" if not failures else "fail",
        "failures": failures[:5],
        "elapsed": round(perf_counter() - t0, 6),
    }


def _case_quiver(name, size_cap, a_budget, tol):
    t0 = perf_counter()
    if name == "a2":
        g = Quiver.from_edges(2, [(1, 2, 1)])
        p = QuiverParams(q=Fraction(2), u=(Fraction(1, 4), Fraction(1, 4)))
        size_cap = size_cap or 16
    elif name == "jordan":
        g = Quiver.from_edges(1, [(1, 1, 1)])
        p = QuiverParams(q=Fraction(2), u=(Fraction(1, 4),))
        size_cap = size_cap or 24  # the loop weight decays slower than A2
    else:
        raise ValueError(f"unknown built-in quiver {name!r}")
    failures = []
    tol = Fraction(tol)
    vectors = [
        a
        for a in itertools.product(range(a_budget + 1), repeat=g.n)
        if sum(a) <= a_budget
    ]
    for a in vectors:
        if sum(a) == 0:
            continue
        support = list(itertools.product(*(range(v + 1) for v in a)))
        total = sum(quiver_kernel(a, b, g, p, size_cap) for b in support)
        if abs(total - 1) > tol:
            failures.append(f"rowsum{a}")
        # K = C M C^-1 with C diagonal 1/P(a), verified entrywise
        pa = quiver_first_cols(a, g, p, size_cap)
        for b in support:
            lhs = quiver_kernel(a, b, g, p, size_cap)
            rhs = quiver_m_entry(a, b, g, p) * quiver_first_cols(b, g, p, size_cap) / pa
            if lhs != rhs:
                failures.append(f"factorization{a}->{b}")
    return {
        "suite": "quiver",
        "quiver": name,
        "size_cap": size_cap,
        "status": "pass" if not failures else "fail",
        "failures": failures[:5],
        "elapsed": round(perf_counter() - t0, 6),
    }


_CASE_FNS = {
    "ag": _case_ag,
    "pipeline": _case_pipeline,
    "qbinomial": _case_qbinomial,
    "jacobi": _case_jacobi,
    "diag": _case_diag,
    "power": _case_power_battery,
    "stochastic": _case_stochastic,
    "chain-measure": _case_chain_measure,
    "bailey": _case_bailey,
    "fristedt": _case_fristedt,
    "quiver": _case_quiver,
}


def run_case(case):
    kind, kwargs = case
    return _CASE_FNS[kind](**kwargs)


# options each suite actually reads; anything else supplied is a config error
_SUITE_FLAGS = {
    "rr": {"order"},
    "ag": {"order", "k", "i"},
    "pipeline": {"order", "k"},
    "qbinomial": {"n", "q"},
    "jacobi": {"order"},
    "diag": {"lmax", "u", "q"},
    "power": {"lmax", "u", "q"},
    "stochastic": {"u", "q"},
    "chain-measure": {"u", "q"},
    "bailey": {"lmax", "u", "q", "count", "seed"},
    "fristedt": {"q"},
    "quiver": {"size_cap"},
}
_SUITE_FLAGS["all"] = set().union(*_SUITE_FLAGS.values()) - {"i", "n", "k"}
_MEASURE_SUITES = {"diag", "power", "stochastic", "chain-measure", "bailey", "all"}


def _check_verify_flags(args):
    allowed = _SUITE_FLAGS[args.suite]
    supplied = {
        name
        for name in ("u", "q", "order", "lmax", "k", "i", "n", "count", "size_cap")
        if getattr(args, name, None) is not None
    }
    extra = supplied - allowed
    if extra:
        raise ValueError(
            f"options not used by suite {args.suite!r}: {sorted(extra)}"
        )
    if args.suite in _MEASURE_SUITES and (args.u or args.q):
        MeasureParams(u=Fraction(args.u or "1/2"), q=Fraction(args.q or "2"))
    if args.suite == "fristedt" and args.q:
        FristedtParams(q=Fraction(args.q))
    if args.suite == "qbinomial" and args.q:
        Fraction(args.q)


def _suite_cases(args, cfg):
    suite = args.suite
    inject = args.inject_fault
    cases = []

    def ag_cases(order, ks):
        for k in ks:
            for i in [args.i] if args.i else range(1, k + 1):
                cases.append(
                    ("ag", {"k": k, "i": i, "order": order, "inject": inject})
                )

    if suite in ("rr", "all"):
        order = cfg.order if cfg.order >= 0 else 60
        cases.append(("ag", {"k": 2, "i": 2, "order": order, "inject": inject}))
        cases.append(("ag", {"k": 2, "i": 1, "order": order, "inject": inject}))
    if suite in ("ag", "all"):
        order = cfg.order if cfg.order >= 0 else 40
        ks = [args.k] if args.k else [2, 3, 4, 5]
        ag_cases(order, ks)
    if suite in ("pipeline", "all"):
        order = cfg.order if cfg.order >= 0 else 60
        for k in [args.k] if args.k else [2, 3, 4]:
            cases.append(("pipeline", {"k": k, "order": order}))
    if suite in ("qbinomial", "all"):
        top = args.n if args.n else 12
        custom_q = args.q if suite == "qbinomial" else None
        for q in (custom_q,) if custom_q else ("1/2", "1/3", "2/5"):
            for n in range(top + 1):
                cases.append(("qbinomial", {"n": n, "q": q}))
    if suite in ("jacobi", "all"):
        order = cfg.order if cfg.order >= 0 else 200
        cases.append(("jacobi", {"a": 5, "b": 1, "order": order}))
        cases.append(("jacobi", {"a": 5, "b": 3, "order": order}))
    if suite in ("diag", "all"):
        l_max = cfg.l_max if cfg.l_max >= 0 else 30
        for u, q in ((str(cfg.u), str(cfg.q)),) if args.u else (
            ("1/2", "2"),
            ("1/3", "3"),
            ("2/5", "5/2"),
        ):
            cases.append(("diag", {"u": u, "q": q, "l_max": l_max}))
    if suite in ("power", "all"):
        l_max = cfg.l_max if cfg.l_max >= 0 else 20
        cases.append(
            (
                "power",
                {"u": str(cfg.u), "q": str(cfg.q), "l_max": l_max, "r_max": 8},
            )
        )
    if suite in ("stochastic", "all"):
        cases.append(
            ("stochastic", {"model": "gl", "u": str(cfg.u), "q": str(cfg.q), "a_max": 40})
        )
        cases.append(
            ("stochastic", {"model": "fristedt", "u": None, "q": "1/2", "a_max": 40})
        )
    if suite in ("chain-measure", "all"):
        cases.append(("chain-measure", {"u": str(cfg.u), "q": str(cfg.q), "size": 10}))
    if suite in ("bailey", "all"):
        l_max = cfg.l_max if cfg.l_max >= 0 else 15
        cases.append(
            (
                "bailey",
                {
                    "u": str(cfg.u),
                    "q": str(cfg.q),
                    "l_max": l_max,
                    "seed": cfg.seed,
                    "count": args.count if args.count else 50,
                },
            )
        )
    if suite in ("fristedt", "all"):
        fq = args.q if suite == "fristedt" else None
        cases.append(
            ("fristedt", {"q": fq or "1/2", "l_max": 10, "r_max": 4, "size": 8})
        )
    if suite in ("quiver", "all"):
        for name in ("a2", "jordan"):
            cases.append(
                (
                    "quiver",
                    {
                        "name": name,
                        "size_cap": args.size_cap,
                        "a_budget": 3,
                        "tol": "1/1000000",
                    },
                )
            )
    if not cases:
        raise ValueError(f"unknown suite {args.suite!r}")
    return cases


def cmd_verify(args) -> int:
    cfg = RunConfig.from_args(args)
    _check_verify_flags(args)
    cases = _suite_cases(args, cfg)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(run_case, cases))
    else:
        reports = [run_case(c) for c in cases]
    failed = 0
    for report in reports:
        _emit(report, cfg.mode)
        if report["status"] != "pass":
            failed += 1
    print(f"{len(reports) - failed}/{len(reports)} checks passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_sample(args) -> int:
    cfg = RunConfig.from_args(args)
    count = args.count
    if args.model == "gl":
        stream = sample_stream(cfg.measure_params(), cfg.seed, count, cfg.eps)
        for s in stream:
            _emit(s.to_json(model="gl"), cfg.mode)
    elif args.model == "fristedt":
        stream = f_sample_stream(cfg.fristedt_params(), cfg.seed, count, cfg.eps)
        for s in stream:
            _emit(s.to_json(model="fristedt"), cfg.mode)
    elif args.model == "quiver":
        if not args.quiver:
            raise ValueError("quiver model requires --quiver FILE")
        try:
            g, qp = load_quiver(args.quiver)
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise ValueError(f"bad quiver file: {exc}") from exc
        cap = args.size_cap or 20
        for i in range(count):
            t = quiver_sample(g, qp, cfg.seed + i, cap, cfg.eps)
            _emit(
                {
                    "model": "quiver",
                    "seed": cfg.seed + i,
                    "partitions": t.to_json(),
                },
                cfg.mode,
            )
    return 0


def cmd_power(args) -> int:
    cfg = RunConfig.from_args(args)
    ll, j, r = args.L, args.j, args.r
    if not 0 <= j <= ll:
        raise ValueError("need 0 <= j <= L")
    if args.model == "gl":
        p = cfg.measure_params()
        closed = kr_closed(ll, j, r, p)
        power = kernel_matrix(ll, p).matpow(r).entry(ll, j)
    else:
        fp = cfg.fristedt_params()
        closed = f_kr_closed(ll, j, r, fp)
        power = f_kernel_matrix(ll, fp).matpow(r).entry(ll, j)
    equal = closed == power
    _emit(
        {
            "model": args.model,
            "L": ll,
            "j": j,
            "r": r,
            "closed_form": str(closed),
            "matrix_power": str(power),
            "equal": equal,
        },
        cfg.mode,
    )
    return 0 if equal else 1


def cmd_kernel(args) -> int:
    cfg = RunConfig.from_args(args)
    l_max = cfg.l_max if cfg.l_max >= 0 else 10
    which = args.matrix
    if args.model == "gl":
        p = cfg.measure_params()
        params = {"u": str(p.u), "q": str(p.q)}
        if which == "K":
            mat = kernel_matrix(l_max, p)
        else:
            d = build_diagonalization(l_max, p)
            mat = {"C": d.c, "M": d.m, "A": d.a, "Ainv": d.a_inv, "E": d.e}[which]
    else:
        fp = cfg.fristedt_params()
        params = {"q": str(fp.q)}
        if which == "K":
            mat = f_kernel_matrix(l_max, fp)
        else:
            d = f_diagonalization(l_max, fp)
            mat = {"C": d.c, "M": d.m, "A": d.a, "Ainv": d.a_inv, "E": d.e}[which]
    _emit(mat.to_json(params=params, model=args.model, name=which), cfg.mode)
    return 0


def cmd_bailey(args) -> int:
    cfg = RunConfig.from_args(args)
    l_max = cfg.l_max if cfg.l_max >= 0 else 15
    p = cfg.measure_params()
    if args.alpha:
        pair = bailey_pair_from_alpha(
            [Fraction(v) for v in args.alpha.split(",")], p
        )
    else:
        pair = unit_bailey_pair(p, l_max)
    report = pair.to_json()
    report.update({"step": 0, "valid": bailey_check(pair)})
    _emit(report, cfg.mode)
    ok = report["valid"]
    for step in range(1, args.steps + 1):
        pair = bailey_step(pair)
        report = pair.to_json()
        report.update({"step": step, "valid": bailey_check(pair)})
        ok = ok and report["valid"]
        _emit(report, cfg.mode)
    return 0 if ok else 1


def cmd_series(args) -> int:
    cfg = RunConfig.from_args(args)
    order = cfg.order if cfg.order >= 0 else 20
    which = args.which
    if which == "ag-sum":
        s = ag_sum(AGSpec(args.k or 2, args.i or 2, order))
    elif which == "ag-product":
        s = ag_product(AGSpec(args.k or 2, args.i or 2, order))
    elif which == "absorption":
        s = absorption_limit_series(args.r, args.delta, order)
    elif which == "theta":
        s = theta_sum(args.A, args.B, order)
    elif which == "jacobi":
        s = jacobi_product(args.v, args.w, order)
    else:
        raise ValueError(f"unknown series {which!r}")
    _emit(s.to_json(), cfg.mode)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchains",
        description=(
            "Exact verification of partition-measure Markov chains and the "
            "q-series identities they prove; plus samplers and dumps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--u", help='chain parameter u as "p/q"')
        sp.add_argument("--q", help='chain parameter q as "p/q"')
        sp.add_argument("--order", type=int, help="series truncation order")
        sp.add_argument("--lmax", type=int, help="matrix truncation")
        sp.add_argument("--eps", help="certification width for intervals")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("verify", help="run a verification battery")
    common(sp)
    sp.add_argument(
        "--suite",
        required=True,
        choices=(
            "rr",
            "ag",
            "pipeline",
            "qbinomial",
            "jacobi",
            "diag",
            "power",
            "stochastic",
            "chain-measure",
            "bailey",
            "fristedt",
            "quiver",
            "all",
        ),
    )
    sp.add_argument("--k", type=int)
    sp.add_argument("--i", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--count", type=int)
    sp.add_argument("--size-cap", dest="size_cap", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--inject-fault", dest="inject_fault", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample", help="draw random partitions from a chain")
    common(sp)
    sp.add_argument("--model", choices=("gl", "fristedt", "quiver"), default="gl")
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--quiver", help="quiver JSON file (quiver model)")
    sp.add_argument("--size-cap", dest="size_cap", type=int)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("power", help="closed-form vs matrix r-step probability")
    common(sp)
    sp.add_argument("--model", choices=("gl", "fristedt"), default="gl")
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("kernel", help="dump a chain matrix as JSON")
    common(sp)
    sp.add_argument("--model", choices=("gl", "fristedt"), default="gl")
    sp.add_argument(
        "--matrix", choices=("K", "C", "M", "A", "Ainv", "E"), default="K"
    )
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("bailey", help="iterate the Bailey step on a pair")
    common(sp)
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--alpha", help='comma-separated "p/q" values')
    sp.set_defaults(func=cmd_bailey)

    sp = sub.add_parser("series", help="print a named series as JSON")
    common(sp)
    sp.add_argument(
        "--which",
        required=True,
        choices=("ag-sum", "ag-product", "absorption", "theta", "jacobi"),
    )
    sp.add_argument("--k", type=int)
    sp.add_argument("--i", type=int)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--A", type=int, default=5)
    sp.add_argument("--B", type=int, default=1)
    sp.add_argument("--v", type=int, default=1)
    sp.add_argument("--w", type=int, default=5)
    sp.set_defaults(func=cmd_series)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
