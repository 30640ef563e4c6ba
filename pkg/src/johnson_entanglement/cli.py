"""Command-line front end: energy tables, entropy runs, figure sweeps and the
verification battery.

Exit codes: 0 success, 1 verification or cross-route agreement failure,
2 invalid configuration, 3 dense-capacity overflow.  Output is deterministic:
fixed orderings, floats at 12 significant digits, no timestamps.  Doubled
half-integer labels appear in ``*_x2`` columns next to a decimal column.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict

import numpy as np

from . import entropy as entropy_mod
from . import heun as heun_mod
from . import spectral, terwilliger, verify
from .scheme import CapacityError, GraphSpec, default_base_vertex, neighborhood_size, vertex_from_subset
from .spectral import CorrelationSpectrum, FillingSpec, HoppingProfile, SubsystemSpec

__all__ = ["ConfigError", "main"]

ROUTE_AGREEMENT_TOL = 1e-6
LN2 = math.log(2.0)


class ConfigError(ValueError):
    """Invalid command configuration (exit code 2)."""


# ---------------------------------------------------------------- parsing

def _parse_int_set(text: str) -> set[int]:
    """Accept "0,2,5" or an inclusive range "0..4"."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return set(range(int(lo), int(hi) + 1))
    return {int(tok) for tok in text.split(",") if tok != ""}


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok != "")


def _parse_sizes(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for tok in text.split(","):
        n, k = tok.split(":")
        out.append((int(n), int(k)))
    return tuple(out)


def _graph_spec(args) -> GraphSpec:
    try:
        return GraphSpec(args.n, args.k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _hopping(args, spec: GraphSpec) -> tuple[HoppingProfile, float | None]:
    if getattr(args, "exp_hopping", None) is not None:
        c = args.exp_hopping
        if c < 0:
            raise ConfigError("exponential hopping constant must be nonnegative")
        return HoppingProfile(tuple(math.exp(-c * i) for i in range(spec.k + 1))), c
    alphas = _parse_float_list(args.alpha)
    if len(alphas) > spec.k + 1:
        raise ConfigError(f"{len(alphas)} hopping amplitudes for diameter {spec.k}")
    return HoppingProfile(alphas), None


def _energy_table(args, spec: GraphSpec):
    hop, c = _hopping(args, spec)
    if c is not None:
        return spectral.energy_exponential(spec, c)
    return spectral.energy_table(spec, hop)


def _filling(args, spec: GraphSpec, table) -> FillingSpec:
    labels = spectral.level_labels_x2(spec)
    chosen = [
        name
        for name, val in (
            ("--occupied", getattr(args, "occupied", None)),
            ("--fill-levels", getattr(args, "fill_levels", None)),
            ("--fill-fraction", getattr(args, "fill_fraction", None)),
        )
        if val is not None
    ]
    if len(chosen) > 1:
        raise ConfigError(f"choose one of {', '.join(chosen)}")
    if getattr(args, "occupied", None) is not None:
        occ = _parse_int_set(args.occupied)
        if not occ <= set(labels):
            raise ConfigError(f"occupied doubled labels must lie in {labels}")
        return FillingSpec(frozenset(occ))
    if getattr(args, "fill_levels", None) is not None:
        m = args.fill_levels
        if not 0 <= m <= spec.k + 1:
            raise ConfigError(f"fill level count {m} outside 0..{spec.k + 1}")
        return FillingSpec(frozenset(labels[:m]))
    if getattr(args, "fill_fraction", None) is not None:
        f = args.fill_fraction
        if not 0.0 <= f <= 1.0:
            raise ConfigError("fill fraction must lie in [0, 1]")
        m = min(spec.k + 1, max(0, round(f * (spec.k + 1))))
        return FillingSpec(frozenset(labels[:m]))
    return spectral.fill_ground_state(table, include_zero_modes=args.include_zero_modes)


def _subsystem(args, spec: GraphSpec) -> SubsystemSpec:
    has_d = getattr(args, "distances", None) is not None
    has_c = getattr(args, "cutoff", None) is not None
    if has_d == has_c:
        raise ConfigError("give exactly one of --distances or --cutoff")
    if has_c:
        if not 0 <= args.cutoff <= spec.k:
            raise ConfigError(f"cutoff {args.cutoff} outside 0..{spec.k}")
        distances = set(range(args.cutoff + 1))
    else:
        distances = _parse_int_set(args.distances)
        if not distances or not distances <= set(range(spec.k + 1)):
            raise ConfigError(f"distances must be a nonempty subset of 0..{spec.k}")
    if getattr(args, "x0", None) is not None:
        try:
            x0 = vertex_from_subset(_parse_int_set(args.x0), spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    else:
        x0 = default_base_vertex(spec)
    return SubsystemSpec(frozenset(distances), x0)


# ---------------------------------------------------------------- output

def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}" if value else "0"
    return str(value)


def _json_ready(value):
    if isinstance(value, float):
        return float(f"{value:.12g}") if value else 0.0
    return value


def _emit(fieldnames, rows, fmt: str, path: str | None) -> None:
    if fmt == "csv":
        lines = [",".join(fieldnames)]
        lines.extend(",".join(_fmt(row[f]) for f in fieldnames) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = [{f: _json_ready(row[f]) for f in fieldnames} for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    _write_text(text, path)


def _write_text(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _j_decimal(j_x2: int) -> str:
    return _fmt(j_x2 / 2.0)


# ---------------------------------------------------------------- routes

def _heun_route_spectrum(spec: GraphSpec, filling: FillingSpec, sub: SubsystemSpec) -> CorrelationSpectrum:
    """T-readout spectrum, with the projector-degenerate cases short-circuited."""
    labels = spectral.level_labels_x2(spec)
    distances = set(sub.distances)
    occupied = set(filling.occupied)
    sv = sum(neighborhood_size(spec, i) for i in distances)
    if distances == set(range(spec.k + 1)):
        occ = sum(terwilliger.level_degeneracy(j, spec) for j in sorted(occupied))
        entries = []
        if spec.vertex_count - occ:
            entries.append((0.0, spec.vertex_count - occ))
        if occ:
            entries.append((1.0, occ))
        return CorrelationSpectrum(tuple(entries))
    if not occupied:
        return CorrelationSpectrum(((0.0, sv),))
    if occupied == set(labels):
        return CorrelationSpectrum(((1.0, sv),))
    if distances != set(range(max(distances) + 1)):
        raise ConfigError("the T-readout route needs contiguous distances 0..N")
    run = labels[: len(occupied)]
    if occupied != set(run):
        raise ConfigError("the T-readout route needs the lowest levels filled contiguously")
    hs = heun_mod.heun_spec(spec, max(distances), run[-1])
    return heun_mod.spectrum_via_heun(spec, hs)


def _route_spectrum(route, spec, filling, sub, cap):
    if route == "oracle":
        c = spectral.chopped_correlation_oracle(spec, filling, sub, cap)
        return spectral.spectrum_oracle(c)
    if route == "modules":
        return terwilliger.assemble_spectrum(spec, filling, sub)
    if route == "heun":
        return _heun_route_spectrum(spec, filling, sub)
    raise ConfigError(f"unknown route {route!r}")


# ---------------------------------------------------------------- commands

def cmd_energies(args) -> int:
    spec = _graph_spec(args)
    table = _energy_table(args, spec)
    filling = _filling(args, spec, table)
    rows = [
        {
            "n": spec.n,
            "k": spec.k,
            "j_x2": row.j_x2,
            "j": _j_decimal(row.j_x2),
            "theta": row.theta,
            "omega": row.omega,
            "degeneracy": row.degeneracy,
            "occupied": int(row.j_x2 in filling.occupied),
        }
        for row in table.rows
    ]
    fields = ["n", "k", "j_x2", "j", "theta", "omega", "degeneracy", "occupied"]
    _emit(fields, rows, args.format, args.output)
    return 0


def cmd_entropy(args) -> int:
    spec = _graph_spec(args)
    table = _energy_table(args, spec)
    filling = _filling(args, spec, table)
    sub = _subsystem(args, spec)
    routes = ["oracle", "modules", "heun"] if args.route == "all" else [args.route]
    spectra = {r: _route_spectrum(r, spec, filling, sub, args.dense_cap) for r in routes}

    discrepancy = 0.0
    if len(routes) > 1:
        for i, r1 in enumerate(routes):
            for r2 in routes[i + 1 :]:
                discrepancy = max(discrepancy, verify.spectra_max_diff(spectra[r1], spectra[r2]))

    unit = "bits" if args.bits else "nats"
    scale = 1.0 / LN2 if args.bits else 1.0
    rows = []
    for r in routes:
        rep = entropy_mod.report(spec, sub, spectra[r])
        rows.append(
            {
                "n": spec.n,
                "k": spec.k,
                "route": r,
                "unit": unit,
                "entropy": rep.entropy_nats * scale,
                "subsystem_size": rep.subsystem_size,
                "boundary_size": rep.boundary_size,
                "ratio_subsystem": rep.ratio_subsystem * scale,
                "ratio_boundary": rep.ratio_boundary * scale,
                "route_discrepancy": discrepancy,
            }
        )
    fields = [
        "n", "k", "route", "unit", "entropy", "subsystem_size",
        "boundary_size", "ratio_subsystem", "ratio_boundary", "route_discrepancy",
    ]
    _emit(fields, rows, args.format, args.output)
    if args.diagnostics:
        print(_diagnostics_line(spec, filling, sub), file=sys.stderr)
    if args.spectrum_output:
        srows = [
            {"route": r, "lambda": lam, "multiplicity": mult}
            for r in routes
            for lam, mult in spectra[r].entries
        ]
        _emit(["route", "lambda", "multiplicity"], srows, args.format, args.spectrum_output)
    if discrepancy > ROUTE_AGREEMENT_TOL:
        print(f"route disagreement {discrepancy:g} over {ROUTE_AGREEMENT_TOL:g}", file=sys.stderr)
        return 1
    return 0


def _diagnostics_line(spec, filling, sub) -> str:
    distances = sorted(sub.distances)
    occupied = sorted(filling.occupied)
    labels = spectral.level_labels_x2(spec)
    contiguous = (
        distances == list(range(distances[0], distances[-1] + 1))
        and occupied == labels[: len(occupied)]
        and occupied
        and len(occupied) < len(labels)
        and max(distances) < spec.k
    )
    if contiguous:
        hs = heun_mod.heun_spec(spec, max(distances), occupied[-1])
        return f"heun weights: mu={_fmt(hs.mu)} nu={_fmt(hs.nu)}"
    return "heun weights undefined for this configuration"


# ---------------------------------------------------------------- sweeps

def _tenth_filling(k: int) -> int:
    """Lowest levels counted by j label: one tenth of the k + 1 levels, at least 1."""
    return max(1, math.ceil((k + 1) / 10))


def _single_shell_entropy(spec, filling, i) -> float:
    sub = SubsystemSpec(frozenset({i}), default_base_vertex(spec))
    return entropy_mod.von_neumann(terwilliger.assemble_spectrum(spec, filling, sub))


def sweep_fig2a(args):
    """Single-shell entropies at shells near k/2, k/4, k/8 versus n (k = n/2)."""
    rows = []
    for n in range(8, 31, 2):
        spec = GraphSpec(n, n // 2)
        k = spec.k
        fill = args.fill_levels if args.fill_levels is not None else _tenth_filling(k)
        filling = FillingSpec(frozenset(spectral.level_labels_x2(spec)[:fill]))
        for shell_label, i in (("k/2", k // 2), ("k/4", k // 4), ("k/8", k // 8)):
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "shell": shell_label,
                    "i": i,
                    "fill_levels": fill,
                    "subsystem_size": neighborhood_size(spec, i),
                    "entropy": _single_shell_entropy(spec, filling, i),
                }
            )
    return ["n", "k", "shell", "i", "fill_levels", "subsystem_size", "entropy"], rows


def sweep_fig2b(args):
    """Entropy per site of every single shell, for every bottom-run filling."""
    spec = GraphSpec(args.n, args.k)
    labels = spectral.level_labels_x2(spec)
    rows = []
    for i in range(spec.k + 1):
        size = neighborhood_size(spec, i)
        for fill in range(1, spec.k + 2):
            filling = FillingSpec(frozenset(labels[:fill]))
            s = _single_shell_entropy(spec, filling, i)
            rows.append(
                {
                    "n": spec.n,
                    "k": spec.k,
                    "i": i,
                    "fill_levels": fill,
                    "subsystem_size": size,
                    "entropy": s,
                    "entropy_per_site": s / size,
                }
            )
    return ["n", "k", "i", "fill_levels", "subsystem_size", "entropy", "entropy_per_site"], rows


FIG3_FIELDS = [
    "n", "k", "cutoff", "fill_levels", "subsystem_size",
    "boundary_size", "cut_size", "entropy", "ratio_boundary", "ratio_cut",
]


def _fig3_row(spec: GraphSpec, fill: int, n_cut: int) -> dict:
    """One grid point of a ball sweep, with both area-law normalizations.

    ``boundary_size`` is the subsystem's outermost shell; ``cut_size`` adds
    the first shell of the complement, i.e. the full bipartition cut.  The
    ratio against the cut is the one peaking when subsystem and complement
    are both large.
    """
    labels = spectral.level_labels_x2(spec)
    filling = FillingSpec(frozenset(labels[:fill]))
    sub = SubsystemSpec(frozenset(range(n_cut + 1)), default_base_vertex(spec))
    rep = entropy_mod.report(spec, sub, _heun_route_spectrum(spec, filling, sub))
    cut = rep.boundary_size + neighborhood_size(spec, n_cut + 1)
    return {
        "n": spec.n,
        "k": spec.k,
        "cutoff": n_cut,
        "fill_levels": fill,
        "subsystem_size": rep.subsystem_size,
        "boundary_size": rep.boundary_size,
        "cut_size": cut,
        "entropy": rep.entropy_nats,
        "ratio_boundary": rep.ratio_boundary,
        "ratio_cut": rep.entropy_nats / cut,
    }


def sweep_fig3a(args):
    """Cut-boundary ratio over graph diameter k and ball radius N."""
    rows = []
    for k in range(1, args.n // 2 + 1):
        spec = GraphSpec(args.n, k)
        fill = args.fill_levels if args.fill_levels is not None else _tenth_filling(k)
        rows.extend(_fig3_row(spec, fill, n_cut) for n_cut in range(k))
    return FIG3_FIELDS, rows


def sweep_fig3b(args):
    """Cut-boundary ratio over filling depth and ball radius at fixed (n, k)."""
    spec = GraphSpec(args.n, args.k)
    rows = [
        _fig3_row(spec, fill, n_cut)
        for fill in range(1, spec.k + 2)
        for n_cut in range(spec.k)
    ]
    return FIG3_FIELDS, rows


def sweep_fig4(args):
    """Per-chain prefix entropies against the prefix's outermost single site.

    Follows two chains of J(30, 15) by default: the doubled spin pairs
    (13, 15) and (15, 15).  Each module is one chain with unit multiplicity,
    so entropies here are not weighted by module degeneracy.
    """
    spec = GraphSpec(args.n, args.k)
    labels = spectral.level_labels_x2(spec)
    fill = args.fill_levels if args.fill_levels is not None else _tenth_filling(spec.k)
    filling = FillingSpec(frozenset(labels[:fill]))
    x0 = default_base_vertex(spec)
    wanted = {(spec.k - 2, spec.k), (spec.k, spec.k)}
    rows = []
    for label in terwilliger.enumerate_modules(spec):
        if (label.j1_x2, label.j2_x2) not in wanted:
            continue
        for prefix in range(1, label.dim):
            prefix_set = frozenset(range(label.i_min, label.i_min + prefix))
            block = terwilliger.module_correlation_block(
                label, filling, SubsystemSpec(prefix_set, x0), spec
            ).matrix
            rows.append(
                {
                    "n": spec.n,
                    "k": spec.k,
                    "j1_x2": label.j1_x2,
                    "j2_x2": label.j2_x2,
                    "chain_length": label.dim,
                    "prefix_length": prefix,
                    "fill_levels": fill,
                    "entropy_prefix": _chain_entropy(block),
                    "entropy_boundary_site": _chain_entropy(
                        terwilliger.module_correlation_block(
                            label,
                            filling,
                            SubsystemSpec(frozenset({label.i_min + prefix - 1}), x0),
                            spec,
                        ).matrix
                    ),
                }
            )
    return [
        "n", "k", "j1_x2", "j2_x2", "chain_length", "prefix_length",
        "fill_levels", "entropy_prefix", "entropy_boundary_site",
    ], rows


def _chain_entropy(block) -> float:
    lams = spectral.clamp_unit_interval(np.linalg.eigvalsh(block))
    return float(sum(entropy_mod.binary_entropy(float(lam)) for lam in lams))


SWEEPS = {
    "fig2a": sweep_fig2a,
    "fig2b": sweep_fig2b,
    "fig3a": sweep_fig3a,
    "fig3b": sweep_fig3b,
    "fig4": sweep_fig4,
}


def cmd_sweep(args) -> int:
    if args.figure not in SWEEPS:
        raise ConfigError(f"unknown figure {args.figure!r}")
    fields, rows = SWEEPS[args.figure](args)
    _emit(fields, rows, args.format, args.output)
    return 0


def cmd_verify(args) -> int:
    sizes = _parse_sizes(args.sizes) if args.sizes else None
    results = verify.run_battery(sizes=sizes, quick=args.quick, cap=args.dense_cap)
    payload = {
        "passed": all(r.passed for r in results),
        "checks": [
            {**asdict(r), "worst": _json_ready(r.worst)} for r in results
        ],
    }
    _write_text(json.dumps(payload, indent=2) + "\n", args.output)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{status:4s} {r.name} (worst {r.worst:.3g})", file=sys.stderr)
    return 0 if payload["passed"] else 1


# ---------------------------------------------------------------- parser

def _add_common(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="output path; default stdout")
    p.add_argument("--dense-cap", type=int, default=None, help="override the dense-matrix cap")


def _add_model(p):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", default="0,1", help="hopping amplitudes by distance, e.g. 0,1")
    p.add_argument("--exp-hopping", type=float, default=None, help="alpha_i = exp(-c i)")
    p.add_argument("--occupied", default=None, help="explicit doubled j labels, e.g. 0,2")
    p.add_argument("--fill-levels", type=int, default=None, help="occupy the lowest M levels")
    p.add_argument("--fill-fraction", type=float, default=None, help="occupy round(f (k+1)) lowest levels")
    p.add_argument("--include-zero-modes", action="store_true", help="treat zero-energy levels as occupied")


def _build_parser():
    import argparse

    parser = argparse.ArgumentParser(
        prog="je",
        description="Free-fermion entanglement on Johnson graphs via three cross-checking routes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energies", help="per-level energy table and the occupied set")
    _add_model(p)
    _add_common(p)
    p.set_defaults(handler=cmd_energies)

    p = sub.add_parser("entropy", help="entanglement entropy of a neighborhood bundle")
    _add_model(p)
    p.add_argument("--distances", default=None, help='distance set, e.g. "0,2" or "0..3"')
    p.add_argument("--cutoff", type=int, default=None, help="ball of distances 0..N")
    p.add_argument("--x0", default=None, help="base vertex as a comma list, default {1..k}")
    p.add_argument("--route", choices=("oracle", "modules", "heun", "all"), default="modules")
    p.add_argument("--bits", action="store_true", help="display in bits instead of nats")
    p.add_argument("--spectrum-output", default=None, help="also write (lambda, multiplicity) rows here")
    p.add_argument("--diagnostics", action="store_true", help="print the T-operator weights to stderr")
    _add_common(p)
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("sweep", help="figure-reproduction grids as CSV/JSON")
    p.add_argument("--figure", required=True, choices=sorted(SWEEPS))
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--k", type=int, default=15)
    p.add_argument("--fill-levels", type=int, default=None, help="override the default level count")
    _add_common(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", help="run the cross-checking battery")
    p.add_argument("--quick", action="store_true", help="fast subset only")
    p.add_argument("--sizes", default=None, help='graphs to test, e.g. "4:2,6:3,8:4"')
    _add_common(p)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
