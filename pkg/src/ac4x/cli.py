"""Command line front end: ``ac4x <task> --config <path> [--out <dir>] [--seed <u64>]``.

Exit codes: 0 success, 1 usage or configuration error, 2 an invariant was
violated, 3 the Calabi-Yau solver did not converge.
"""

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .acs import anti_preserving, from_fls, lee_jalpha, standard, tilde_jalpha
from .cohomology import (
    h_minus,
    intersection_estimate_check,
    kodaira_table,
    prop_linear_check,
    semicontinuity_scan,
    verify_direct_sum,
)
from .corpus import anti_form, kt_corpus, random_function, random_ls, torus_corpus
from .cy import CyProblem, SolverConfig, normalize_F, solve_cy
from .errors import Ac4xError, NonConvergence, PositivityLoss, RankDeficient
from .fiber import split_g
from .hodge import hodge_decompose, verify_dim4_lemma
from .io import dumps, save_formfield, table_csv
from .models import MODELS, FormField, random_field
from .trig import TrigSpecError, evaluate

TASKS = ("hminus", "decompose", "kodaira-table", "prop-linear", "cy-solve", "deform-scan", "verify")
FAMILIES = ("standard", "fls", "lee", "tilde", "anti_preserving")
EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_NONCONV = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parser():
    p = _Parser(prog="ac4x", description="Almost complex structures on flat 4-manifolds.")
    p.add_argument("task", choices=TASKS)
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--version", action="version", version=f"ac4x {__version__}")
    return p


# ---------------------------------------------------------------------------
# configuration


def load_config(path):
    raw = Path(path).read_bytes()
    try:
        cfg = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from exc
    model = cfg.get("model", "torus")
    if model not in MODELS:
        raise UsageError(f"unknown model {model!r}")
    n = cfg.get("n", 16)
    if not isinstance(n, int) or n < 4 or n & (n - 1):
        raise UsageError(f"grid size n must be a power of two >= 4, got {n!r}")
    return cfg, hashlib.sha256(raw).hexdigest()


def _func(spec, n, model, default=0.0):
    spec = default if spec is None else spec
    try:
        return evaluate(spec, n, model)
    except TrigSpecError as exc:
        raise UsageError(str(exc)) from exc


def build_structure(con, n, model, t=1.0):
    """Structure named by a construction table; ``t`` scales its deformation parameters."""
    family = con.get("family", "standard")
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; expected one of {FAMILIES}")
    sign = con.get("sign", 1)
    if family == "standard":
        return standard(n, model)
    if family == "fls":
        l, s = _func(con.get("l"), n, model), _func(con.get("s"), n, model)
        return from_fls(t * l, t * s, sign, model, n)
    alpha_spec = con.get("alpha", {})
    alpha = anti_form(
        _func(alpha_spec.get("beta"), n, model), _func(alpha_spec.get("jbeta"), n, model), n, model
    )
    if family == "anti_preserving":
        return anti_preserving(alpha, t * _func(con.get("r"), n, model), sign)
    alpha = alpha * t
    return (lee_jalpha if family == "lee" else tilde_jalpha)(alpha, sign)


def solver_config(cfg):
    known = SolverConfig.__dataclass_fields__
    sc = cfg.get("solver", {})
    bad = set(sc) - set(known)
    if bad:
        raise UsageError(f"unknown solver keys {sorted(bad)}")
    return SolverConfig(**sc)


# ---------------------------------------------------------------------------
# tasks; each returns (summary dict, optional csv text, {name: field} dumps)


def _check_summary(s):
    if s.h_plus + s.h_minus != s.b2 or s.h_minus > s.b_plus or s.h_plus < s.b_minus:
        raise InvariantViolation(f"inconsistent dimensions {s.to_dict()}")


def task_hminus(cfg, rng):
    n, model = cfg.get("n", 16), cfg.get("model", "torus")
    J = build_structure(cfg.get("construction", {}), n, model)
    s = h_minus(J)
    _check_summary(s)
    return s.to_dict(), None, {"structure": J} if cfg.get("dump") else {}


def task_decompose(cfg, rng):
    n, model = cfg.get("n", 16), cfg.get("model", "torus")
    if model != "torus":
        raise UsageError("decompose runs on the torus")
    comps = cfg.get("field", {})
    if comps:
        labels = ("e12", "e13", "e14", "e23", "e24", "e34")
        bad = set(comps) - set(labels)
        if bad:
            raise UsageError(f"unknown components {sorted(bad)}")
        a = FormField(2, np.stack([_func(comps.get(k), n, model) for k in labels]))
    else:
        a = random_field(2, n, rng, kmax=max(1, n // 4))
    parts = hodge_decompose(a)
    recon = float(np.max(np.abs((parts.harmonic + parts.exact + parts.coexact - a).coeffs)))
    out = {"reconstruction": recon, "norms": {k: getattr(parts, k).sup() for k in parts._fields}}
    if np.max(np.abs(split_g(a.coeffs).asd)) <= 1e-10:
        plus, minus = verify_dim4_lemma(a)
        out["lemma_defects"] = [plus, minus]
        if max(plus, minus) > 1e-9:
            raise InvariantViolation(f"lemma defects {plus:.3g}, {minus:.3g}")
    if recon > 1e-9:
        raise InvariantViolation(f"reconstruction error {recon:.3g}")
    dumps_ = {k: getattr(parts, k) for k in ("harmonic", "exact", "coexact")} if cfg.get("dump") else {}
    return out, None, dumps_


def task_kodaira(cfg, rng):
    rows = kodaira_table(cfg.get("n", 16))
    csv = table_csv(["preset", "rank", "h_minus", "h_plus"], [[r[k] for k in ("preset", "rank", "h_minus", "h_plus")] for r in rows])
    if any(r["h_minus"] != 2 - r["rank"] for r in rows):
        raise InvariantViolation(f"table rows disagree with h^- = 2 - rank: {rows}", {"rows": rows}, csv)
    return {"rows": rows}, csv, {}


def task_prop_linear(cfg, rng):
    n = cfg.get("n", 16)
    trials = int(cfg.get("trials", 50))
    rows = []
    for i in range(trials):
        l, s = random_ls(rng, n)
        u, v = rng.uniform(-2, 2, size=2)
        f_sign = 1 if rng.random() < 0.5 else -1
        rows.append([i, float(u), float(v), f_sign, *prop_linear_check(l, s, u, v, f_sign, n)])
    csv = table_csv(["trial", "u", "v", "f_sign", "h_via_rank", "h_via_hminus"], rows)
    mismatches = [r[0] for r in rows if r[4] != r[5]]
    summary = {"trials": trials, "mismatches": mismatches}
    if mismatches:
        raise InvariantViolation(f"rank and h^- routes disagree on trials {mismatches}", summary, csv)
    return summary, csv, {}


def _cy_problem(cfg, t=1.0):
    n = cfg.get("n", 16)
    F = normalize_F(FormField.scalar(_func(cfg.get("F"), n, "torus")))
    target = build_structure(cfg.get("construction", {}), n, "torus", t)
    return CyProblem(F, target, config=solver_config(cfg))


def _check_cy(sol, cfg):
    if sol.residual_volume > cfg.tol_vol or sol.residual_invariance > cfg.tol_inv:
        raise InvariantViolation(f"solution residuals too large: {sol.summary()}")
    if sol.residual_closed > cfg.tol_closed or sol.positivity_min <= 0:
        raise InvariantViolation(f"solution not closed or not positive: {sol.summary()}")


def task_cy_solve(cfg, rng):
    if cfg.get("model", "torus") != "torus":
        raise UsageError("cy-solve runs on the torus")
    p = _cy_problem(cfg)
    sol = solve_cy(p)
    _check_cy(sol, p.config)
    return {"problem": p.to_dict(), "solution": sol.summary()}, None, {"omega_tilde": sol.omega_tilde} if cfg.get("dump") else {}


def task_deform_scan(cfg, rng):
    n, model = cfg.get("n", 16), cfg.get("model", "torus")
    con = cfg.get("construction", {})
    scan = cfg.get("scan", {})
    samples, radius = int(scan.get("samples", 6)), float(scan.get("radius", 1.0))
    table = semicontinuity_scan(lambda t: build_structure(con, n, model, t), samples, radius)
    summary = {
        "rows": [[r.t, r.h_plus, r.h_minus] for r in table.rows],
        "consistent": table.consistent,
    }
    if scan.get("cy_check", False):
        if model != "torus":
            raise UsageError("cy_check runs on the torus")
        results = []
        for r in table.rows:
            sol = solve_cy(_cy_problem(cfg, r.t))
            results.append({"t": r.t, "iterations": sol.iterations, "residual_volume": sol.residual_volume})
        summary["cy"] = results
    if not table.consistent:
        raise InvariantViolation("h^+ dropped or h^- rose along the path", summary, table.csv())
    return summary, table.csv(), {}


def run_verify_suite(n=8, seed=0, trials=10):
    """Compact invariant suite; returns {suite: {"passed": bool, ...}}."""
    rng = np.random.default_rng(seed)
    res = {}
    a, b = h_minus(standard(n)), h_minus(standard(n, "kt"))
    res["reference_values"] = {
        "passed": (a.h_plus, a.h_minus, b.h_plus, b.h_minus) == (4, 2, 2, 2),
        "torus": [a.h_plus, a.h_minus],
        "kt": [b.h_plus, b.h_minus],
    }
    rows = kodaira_table(n)
    res["kodaira_table"] = {"passed": [r["h_minus"] for r in rows] == [2, 1, 0], "rows": rows}
    defects = []
    for _ in range(trials):
        f = random_field(2, n, rng, kmax=max(1, n // 4))
        defects.append(max(verify_dim4_lemma(FormField(2, split_g(f.coeffs).sd))))
    res["hodge_lemma"] = {"passed": max(defects) <= 1e-9, "max_defect": max(defects)}
    pairs = [prop_linear_check(*random_ls(rng, n), *rng.uniform(-2, 2, 2), 1, n) for _ in range(trials)]
    res["prop_linear"] = {"passed": all(x == y for x, y in pairs), "pairs": [list(p) for p in pairs]}
    corpus = torus_corpus(rng, n, 6) + kt_corpus(rng, n, 3)
    sums = [h_minus(J) for J in corpus]
    res["sum_rule"] = {"passed": all(s.h_plus + s.h_minus == s.b2 and s.h_minus <= s.b_plus for s in sums)}
    ok, cross = True, 0.0
    for J in corpus[:6]:
        try:
            rep = verify_direct_sum(J)
            ok &= rep.purity_ok
            cross = max(cross, rep.cross_max)
        except RankDeficient:
            ok = False
    res["direct_sum"] = {"passed": bool(ok), "cross_max": cross}
    Jt = anti_preserving(anti_form(1.0, 0.0, n), 0.5 + random_function(rng, n, amp=0.3))
    dim = intersection_estimate_check(standard(n), Jt)
    res["intersection"] = {"passed": dim == 1, "dim": dim}
    sol = solve_cy(CyProblem(FormField.zeros(0, n)))
    res["cy_trivial"] = {"passed": sol.iterations == 1 and sol.residual_volume == 0.0 and float(np.max(np.abs(sol.h))) == 0.0}
    return res


def task_verify(cfg, rng, seed=0):
    res = run_verify_suite(cfg.get("n", 8), seed, int(cfg.get("trials", 10)))
    failed = sorted(k for k, v in res.items() if not v["passed"])
    summary = {"suites": res, "failed": failed}
    if failed:
        raise InvariantViolation(f"failed suites: {failed}", summary)
    return summary, None, {}


RUNNERS = {
    "hminus": task_hminus,
    "decompose": task_decompose,
    "kodaira-table": task_kodaira,
    "prop-linear": task_prop_linear,
    "cy-solve": task_cy_solve,
    "deform-scan": task_deform_scan,
}


def _write(out, base, summary, csv, fields):
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(dumps({**base, "result": summary}))
    if csv is not None:
        (out / "table.csv").write_text(csv)
    for name, f in fields.items():
        save_formfield(out / f"{name}.formfield.json", f)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg, digest = load_config(args.config)
    except FileNotFoundError as exc:
        print(f"ac4x: config not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"ac4x: {exc}", file=sys.stderr)
        return EXIT_USAGE
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    if not 0 <= seed < 2**64:
        print("ac4x: seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_USAGE
    rng = np.random.default_rng(seed)
    base = {"task": args.task, "version": __version__, "config_sha256": digest, "seed": seed}
    try:
        if args.task == "verify":
            summary, csv, fields = task_verify(cfg, rng, seed)
        else:
            summary, csv, fields = RUNNERS[args.task](cfg, rng)
    except UsageError as exc:
        print(f"ac4x: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"ac4x: invariant violated: {exc.args[0]}", file=sys.stderr)
        summary = exc.args[1] if len(exc.args) > 1 else {"error": exc.args[0]}
        _write(args.out, {**base, "status": "invariant-violated"}, summary, exc.args[2] if len(exc.args) > 2 else None, {})
        return EXIT_INVARIANT
    except (NonConvergence, PositivityLoss) as exc:
        print(f"ac4x: solver failed: {exc}", file=sys.stderr)
        _write(args.out, {**base, "status": "non-convergence"}, {"error": str(exc)}, None, {})
        return EXIT_NONCONV
    except (Ac4xError, TypeError, ValueError) as exc:
        # remaining errors come from malformed configuration values
        print(f"ac4x: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(args.out, {**base, "status": "ok"}, summary, csv, fields)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
