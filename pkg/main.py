import argparse
import logging
import sys

import numpy as np
import pandas as pd

from quantum_search.config import ENGINES, FORMATS, Settings
from quantum_search.diffusion import (
    ExactDiffusionSpec,
    InfinitesimalDiffusionSpec,
    exact_diffusion_matrix,
    infinitesimal_diffusion_matrix,
    synthesis_identity_defect,
)
from quantum_search.errors import QuantumSearchError
from quantum_search.gates import (
    check_unitary,
    defect_halving_ratio,
    dense_walsh_hadamard,
    example_transition_matrix,
    hadamard_m,
    reversible_gate,
)
from quantum_search.oracle import (
    ReversibleCircuit,
    TruthTableOracle,
    compile_marked_indicator,
    kickback_apply,
    phase_oracle_apply,
)
from quantum_search.phase_ops import PhaseSpec, phase_rotation_operator
from quantum_search.schrodinger import (
    EPSILON_WARN,
    PotentialGrid,
    evolve,
    loop_diffusion_matrix,
    potential_rotation,
    worst_case_step_growth,
)
from quantum_search.search import (
    SearchConfig,
    per_iteration_gain,
    run_search,
    theoretical_success_probability,
)
from quantum_search.statevec import basis_state, probability, random_state, uniform_state
from quantum_search.trace_exporter import TraceExporter

logger = logging.getLogger(__name__)

MAX_QUBITS = 24
MAX_AUDIT_QUBITS = 5
MAX_GRID_SITES = 4096
SCALING_BAND = (3.5, 4.5)


def _export(args, settings, df, default_name):
    exporter = TraceExporter(settings.output_root)
    path = exporter.resolve(args.out, default_name, args.format)
    exporter.export(df, path, args.format)
    print(f"📁 Results written to {path} ({len(df)} rows)")
    return path


def cmd_search(args, settings):
    if not 1 <= args.n <= MAX_QUBITS:
        args.parser.error(f"--n must be in [1, {MAX_QUBITS}]")
    N = 1 << args.n
    if not 0 <= args.target < N:
        args.parser.error(f"--target must be in [0, {N})")
    config = SearchConfig(
        n=args.n, target=args.target, gamma=args.gamma, reps=args.reps, seed=args.seed,
        engine=args.engine, extra_marked=frozenset(args.extra_marked),
    )
    print(f"🚀 Searching N={N} for target {args.target} ({config.engine.value} engine)")
    result = run_search(config)
    df = result.trace.to_frame()
    if args.command == "trace":
        df["gain"] = [np.nan] + per_iteration_gain(result.trace)
    _export(args, settings, df, f"{args.command}_n{args.n}_t{args.target}")
    print(
        f"📊 N={N} reps={result.reps} success={result.success_probability:.12f} "
        f"measured={result.measured_index} seed={args.seed}"
    )
    if result.success_probability < args.min_success:
        print(f"❌ success probability below --min-success {args.min_success}")
        return 1
    print("✅ Search complete")
    return 0


def cmd_sweep(args, settings):
    if not args.n_values:
        args.parser.error("--n-values needs at least one size")
    if any(not 1 <= n <= MAX_QUBITS for n in args.n_values):
        args.parser.error(f"sweep sizes must be in [1, {MAX_QUBITS}]")
    rows = []
    for n in args.n_values:
        result = run_search(SearchConfig(n=n, target=args.target % (1 << n), seed=args.seed, engine=args.engine))
        rows.append({
            "n": n,
            "N": 1 << n,
            "reps": result.reps,
            "success": result.success_probability,
            "theory": theoretical_success_probability(1 << n, result.reps),
        })
        print(f"  • N={1 << n}: reps={result.reps}, success={result.success_probability:.6f}")
    df = pd.DataFrame(rows)
    _export(args, settings, df, "sweep")
    failed = df[df["success"] < args.min_success]
    if not failed.empty:
        print(f"❌ {len(failed)} size(s) below success {args.min_success}: {failed['N'].tolist()}")
        return 1
    print(f"✅ All {len(df)} sizes reach success >= {args.min_success}")
    return 0


def _build_grid(args):
    if args.values:
        return PotentialGrid.from_values(args.values, dx=args.dx, dt=args.dt)
    if args.potential == "square":
        return PotentialGrid.square_well(args.sites, args.depth, args.width, args.center, args.dx, args.dt)
    if args.potential == "quadratic":
        return PotentialGrid.quadratic_well(args.sites, args.curvature, args.center, args.dx, args.dt)
    return PotentialGrid.flat(args.sites, args.dx, args.dt)


def cmd_schrodinger(args, settings):
    if args.dx <= 0 or args.dt <= 0:
        args.parser.error("--dx and --dt must be positive")
    if args.steps < 0:
        args.parser.error("--steps must be >= 0")
    sites = len(args.values) if args.values else args.sites
    if not 2 <= sites <= MAX_GRID_SITES:
        args.parser.error(f"grid must have between 2 and {MAX_GRID_SITES} sites")
    epsilon = args.dt / (args.dx * args.dx)
    if epsilon > EPSILON_WARN and not args.force:
        print(f"❌ eps = dt/dx^2 = {epsilon:.3g} > {EPSILON_WARN}; rerun with --force to proceed anyway")
        return 1
    grid = _build_grid(args)
    psi0 = random_state(grid.N, args.seed) if args.initial == "random" else uniform_state(grid.N)
    print(f"🚀 Evolving {grid.name} potential on {grid.N} sites, eps={grid.epsilon:.3g}, {args.steps} steps")
    final, trace = evolve(psi0, grid, args.steps, per_site=args.per_site)
    _export(args, settings, trace.to_frame(), f"schrodinger_{grid.name}")

    site = grid.minimum_site
    drift = abs(final.norm() - psi0.norm())
    bound = args.steps * worst_case_step_growth(grid)
    print(
        f"📊 prob at minimum (site {site}): {probability(psi0, site):.6g} -> {probability(final, site):.6g}; "
        f"norm drift {drift:.3e} (bound {bound:.3e})"
    )
    if drift > bound + args.tol:
        print("❌ norm drift exceeds steps x per-step growth bound")
        return 1
    print("✅ Evolution complete")
    return 0


def _audit_rows(n, break_b, tol, identity_tol, synthesis_tol):
    N = 1 << n
    rows = []

    def add(check, value, limit, passed=None):
        rows.append({
            "check": check,
            "value": value,
            "tolerance": limit,
            "passed": bool(value <= limit) if passed is None else bool(passed),
        })

    for name, op in [
        ("unitarity M", hadamard_m()),
        ("unitarity NOT", reversible_gate("NOT")),
        ("unitarity CNOT", reversible_gate("CNOT")),
        ("unitarity CCNOT", reversible_gate("CCNOT")),
        ("unitarity example 4x4", example_transition_matrix()),
        (f"unitarity W(n={n})", dense_walsh_hadamard(n)),
        (f"unitarity R_pi(N={N})", phase_rotation_operator(N, PhaseSpec({N - 1}, np.pi))),
        (f"unitarity potential R(N={N})", potential_rotation(PotentialGrid(np.linspace(-1.0, 1.0, max(N, 2))))),
        (f"unitarity D(N={N})", exact_diffusion_matrix(N, break_b)),
    ]:
        add(name, check_unitary(op).defect, identity_tol)

    spec = ExactDiffusionSpec.for_size(N, break_b)
    residual_i, residual_ii = spec.unitarity_residuals()
    add("column norm |a|^2+(N-1)|b|^2-1", abs(residual_i), tol)
    add("column overlap 2Re(ab*)+(N-2)|b|^2", abs(residual_ii), tol)
    d = exact_diffusion_matrix(N, break_b).matrix
    add("column sums - 1", float(np.max(np.abs(d.sum(axis=0) - 1.0))), tol)
    add(f"synthesis -W I0 W vs D(n={n})", synthesis_identity_defect(n), synthesis_tol)
    if N == 2:
        add("D(2) equals NOT", float(np.max(np.abs(d - reversible_gate("NOT").matrix))), tol)

    ratio = defect_halving_ratio(
        lambda e: infinitesimal_diffusion_matrix(InfinitesimalDiffusionSpec(16, e)), 1e-3
    )
    add("infinitesimal D defect ratio (N=16)", ratio, SCALING_BAND[1], SCALING_BAND[0] <= ratio <= SCALING_BAND[1])
    ratio = defect_halving_ratio(lambda e: loop_diffusion_matrix(16, e), 1e-3)
    add("loop D defect ratio (N=16)", ratio, SCALING_BAND[1], SCALING_BAND[0] <= ratio <= SCALING_BAND[1])
    return rows


def cmd_audit(args, settings):
    if not 1 <= args.n <= MAX_AUDIT_QUBITS:
        args.parser.error(f"--n must be in [1, {MAX_AUDIT_QUBITS}] for dense audits")
    print(f"🔍 Auditing dense operators at n={args.n}" + (f" with b={args.break_b}" if args.break_b is not None else ""))
    df = pd.DataFrame(_audit_rows(args.n, args.break_b, args.tol, settings.identity_tol, args.synthesis_tol))
    for _, row in df.iterrows():
        status = "✅ PASS" if row["passed"] else "❌ FAIL"
        print(f"  {status}  {row['check']}: {row['value']:.3e} (tol {row['tolerance']:.1e})")
    if args.out:
        _export(args, settings, df, "audit")
    failed = int((~df["passed"]).sum())
    if failed:
        print(f"❌ {failed} of {len(df)} checks failed")
        return 1
    print(f"✅ All {len(df)} checks passed")
    return 0


def cmd_kickback_check(args, settings):
    if args.circuit:
        with open(args.circuit, encoding="utf-8") as fh:
            circuit = ReversibleCircuit.from_text(fh.read())
        n = circuit.data_wires
        targets = [args.target]
    else:
        n = args.n
        targets = range(1 << n)
    if not 1 <= n <= MAX_AUDIT_QUBITS:
        args.parser.error(f"--n must be in [1, {MAX_AUDIT_QUBITS}]")
    if any(not 0 <= t < (1 << n) for t in targets):
        args.parser.error(f"--target must be in [0, {1 << n})")
    print(f"🔍 Checking phase kickback against selective inversion for n={n}")
    rows = []
    try:
        for t in targets:
            circ = circuit if args.circuit else compile_marked_indicator(n, t)
            oracle = TruthTableOracle(n, frozenset({t}))
            deviation = 0.0
            for x in range(1 << n):
                e_x = basis_state(1 << n, x)
                got = kickback_apply(e_x, circ, settings.disentangle_tol)
                deviation = max(deviation, float(np.max(np.abs(got.amps - phase_oracle_apply(e_x, oracle).amps))))
            rows.append({"target": t, "gate_count": circ.gate_count, "max_deviation": deviation})
    except QuantumSearchError as e:
        print(f"❌ {e}")
        return 1
    df = pd.DataFrame(rows)
    if args.out:
        _export(args, settings, df, f"kickback_n{n}")
    worst = float(df["max_deviation"].max())
    print(f"📊 {len(df)} target(s), max deviation {worst:.3e}, gates per circuit {df['gate_count'].max()}")
    if worst > args.tol:
        print(f"❌ deviation above {args.tol:.1e}")
        return 1
    print("✅ Kickback circuit matches selective inversion on every basis state")
    return 0


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser(settings):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.seed)
    common.add_argument("--out", default=None, help="output file (default: timestamped run folder)")
    common.add_argument("--format", choices=FORMATS, default=settings.output_format)
    common.add_argument("--engine", choices=ENGINES, default=settings.engine)
    common.add_argument("--log-level", default=settings.log_level)

    parser = argparse.ArgumentParser(
        prog="main.py", description="Quantum search derived from the discretized Schrodinger equation"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in [("search", "run quantum search"), ("trace", "search with per-iteration gain")]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--target", type=int, default=0)
        p.add_argument("--gamma", type=float, default=np.pi)
        p.add_argument("--reps", type=int, default=None, help="iterations (default: floor(pi/4 sqrt(N)))")
        p.add_argument("--extra-marked", type=_int_list, default=[])
        p.add_argument("--min-success", type=float, default=0.0)
        p.set_defaults(func=cmd_search, parser=p)

    p = sub.add_parser("sweep", parents=[common], help="success probability over register sizes")
    p.add_argument("--n-values", type=_int_list, default=[2, 4, 6, 8, 10, 12])
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--min-success", type=float, default=0.9)
    p.set_defaults(func=cmd_sweep, parser=p)

    p = sub.add_parser("schrodinger", parents=[common], help="finite-difference evolution on a loop")
    p.add_argument("--sites", type=int, default=64)
    p.add_argument("--dx", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--potential", choices=("flat", "square", "quadratic"), default="flat")
    p.add_argument("--values", type=_float_list, default=None, help="explicit per-site potential")
    p.add_argument("--depth", type=float, default=1.0)
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--center", type=int, default=None)
    p.add_argument("--curvature", type=float, default=1e-3)
    p.add_argument("--initial", choices=("uniform", "random"), default="uniform")
    p.add_argument("--per-site", action="store_true")
    p.add_argument("--force", action="store_true")
    p.add_argument("--tol", type=float, default=settings.roundoff_tol)
    p.set_defaults(func=cmd_schrodinger, parser=p)

    p = sub.add_parser("audit", parents=[common], help="dense unitarity and synthesis audits")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--break-b", type=float, default=None, help="substitute this off-diagonal b")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--synthesis-tol", type=float, default=1e-13, help="bound on |D - (-W I0 W)|")
    p.set_defaults(func=cmd_audit, parser=p)

    p = sub.add_parser("kickback-check", parents=[common], help="ancilla kickback vs selective inversion")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--circuit", default=None, help="circuit file, one `KIND wire[,wire[,wire]]` per line")
    p.add_argument("--target", type=int, default=0, help="marked index for --circuit")
    p.add_argument("--tol", type=float, default=settings.kickback_tol)
    p.set_defaults(func=cmd_kickback_check, parser=p)
    return parser


def main(argv=None):
    try:
        settings = Settings.from_env()
    except QuantumSearchError as e:
        print(f"❌ {e}")
        return 2
    args = build_parser(settings).parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
    logger.debug("running %s with %s", args.command, settings)
    try:
        return args.func(args, settings)
    except QuantumSearchError as e:
        print(f"❌ {args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
