"""Command line front end.

Subcommands wire the generators, the pasting step, assembly, the solver
and the error analysis into reproducible runs with file outputs (OFF
meshes, CSV tables, Matrix Market dumps, legacy VTK snapshots and
rendered PNG figures).  All failures exit non-zero with exactly one
machine-parseable line ``error: <Name>: <detail>`` on stderr; invalid
arguments exit 2, runtime failures exit 1.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import generators
from .analysis import (
    errors,
    geometric_probe,
    interpolate,
    run_cylinder_convergence,
    run_sphere_convergence,
)
from .assembly import DirichletConstraint, ZeroMeanConstraint, assemble, dump_system, solve
from .errors import InvalidParameter, SvemError
from .mesh import read_off, regularity, validate, write_off
from .pasting import paste
from .reporting import format_csv, plot_convergence, plot_solution, write_csv, write_vtk
from .surface import benchmark


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports errors in the package's format."""

    def error(self, message):
        print(f"error: InvalidParameter: {message}", file=sys.stderr)
        raise SystemExit(2)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    raw = os.environ.get("SVEM_THREADS", "1")
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"SVEM_THREADS must be an integer, got {raw!r}") from None


def _parse_int_list(spec: str, what: str) -> list[int]:
    """Parse '2..5' (inclusive range) or '5,10,15' into a list of ints."""
    s = spec.strip()
    try:
        if ".." in s:
            lo_s, hi_s = s.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise InvalidParameter(f"empty {what} range {spec!r}")
            return list(range(lo, hi + 1))
        return [int(tok) for tok in s.split(",") if tok.strip()]
    except ValueError:
        raise InvalidParameter(f"cannot parse {what} list {spec!r}") from None


def _mesh_payload(mesh) -> dict:
    rep = regularity(mesh)
    return {
        "h": rep.h,
        "n_vertices": mesh.n_vertices,
        "n_faces": mesh.n_faces,
        "counts_by_size": {str(k): v for k, v in mesh.counts_by_size().items()},
        "regularity": rep.to_dict(),
    }


def cmd_mesh(args) -> int:
    if args.kind == "sphere":
        mesh = generators.sphere_hybrid(args.level)
    else:
        mesh = generators.cylinder_half(args.half, args.n)
    if args.out:
        write_off(mesh, args.out)
    print(json.dumps(_mesh_payload(mesh), sort_keys=True))
    return 0


def cmd_paste(args) -> int:
    merged = paste(read_off(args.a), read_off(args.b), merge_tol=args.tol)
    if args.out:
        write_off(merged, args.out)
    payload = {
        "counts_by_size": {str(k): v for k, v in merged.counts_by_size().items()},
        "n_vertices": merged.n_vertices,
        "n_faces": merged.n_faces,
        "diagnostics": [dataclasses.asdict(d) for d in validate(merged)],
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_solve(args) -> int:
    mesh = read_off(args.mesh)
    problem = benchmark(args.problem)
    system = assemble(mesh, problem, threads=_threads(args))
    solve(system, method=args.solver)
    record = errors(system, mesh, problem)

    xi = system.solution
    exact = interpolate(mesh, problem)
    resid_vec = system.stiffness @ xi - system.load
    payload = {
        "problem": args.problem,
        "n_dofs": system.n_dofs,
        "h": record.h,
        "err_l2": record.err_l2,
        "err_linf": record.err_linf,
        "err_h1": record.err_h1,
    }
    con = system.constraint
    if isinstance(con, ZeroMeanConstraint):
        payload["residual"] = float(np.linalg.norm(resid_vec))
        payload["discrete_mean"] = float(abs(np.sum(system.mass @ xi)))
    else:
        free = np.setdiff1d(np.arange(system.n_dofs), con.fixed)
        payload["residual"] = float(np.linalg.norm(resid_vec[free]))
        payload["boundary_deviation"] = float(np.abs(xi[con.fixed] - con.values).max())
    payload["geometric_probe"] = geometric_probe(mesh, problem.surface)

    if args.dump_matrices:
        dump_system(system, args.dump_matrices)
    if args.vtk:
        point_data = {"u_h": xi, "u_exact": exact, "error": exact - xi}
        write_vtk(mesh, point_data, args.vtk, title=f"svem {args.problem}")
    if args.csv:
        write_csv([record], None, args.csv)
    if args.plot:
        plot_solution(mesh, xi, args.plot, title=f"u_h ({args.problem})")
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_convergence(args) -> int:
    checkpoint = None
    if args.csv:
        # keep rows written so far if a later level fails
        def checkpoint(partial):
            write_csv(partial, None, args.csv)

    threads = _threads(args)
    if args.problem == "sphere-xy":
        if args.n_list is not None:
            raise InvalidParameter("--n-list applies to cylinder-exp, use --levels")
        levels = _parse_int_list(args.levels, "level")
        records, slope_fit = run_sphere_convergence(
            levels, threads=threads, method=args.solver, on_record=checkpoint
        )
    else:
        if args.levels != "1..6" and args.n_list is None:
            raise InvalidParameter("--levels applies to sphere-xy, use --n-list")
        ns = _parse_int_list(args.n_list or "5,10,15,20,25,30", "n")
        records, slope_fit = run_cylinder_convergence(
            ns, threads=threads, method=args.solver, on_record=checkpoint
        )

    if args.csv:
        write_csv(records, slope_fit, args.csv)
        print(json.dumps(slope_fit, sort_keys=True))
    else:
        sys.stdout.write(format_csv(records, slope_fit))
    if args.plot:
        plot_convergence(records, slope_fit, args.plot)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="svem", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mesh_p = sub.add_parser("mesh", help="generate a benchmark mesh")
    mesh_sub = mesh_p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    sphere_p = mesh_sub.add_parser("sphere", help="hybrid triangle/hexagon sphere mesh")
    sphere_p.add_argument("--level", type=int, required=True)
    sphere_p.add_argument("--out", help="write the mesh as an OFF file")
    sphere_p.set_defaults(func=cmd_mesh)
    cyl_p = mesh_sub.add_parser("cylinder", help="structured half-cylinder grid")
    cyl_p.add_argument("--half", type=int, choices=(1, 2), required=True)
    cyl_p.add_argument("--n", type=int, required=True)
    cyl_p.add_argument("--out", help="write the mesh as an OFF file")
    cyl_p.set_defaults(func=cmd_mesh)

    paste_p = sub.add_parser("paste", help="merge two meshes along a shared seam")
    paste_p.add_argument("a", help="first OFF mesh")
    paste_p.add_argument("b", help="second OFF mesh")
    paste_p.add_argument("--tol", type=float, default=None, help="vertex merge tolerance")
    paste_p.add_argument("--out", help="write the pasted mesh as an OFF file")
    paste_p.set_defaults(func=cmd_paste)

    solve_p = sub.add_parser("solve", help="assemble and solve one benchmark run")
    solve_p.add_argument("--mesh", required=True, help="OFF mesh to solve on")
    solve_p.add_argument(
        "--problem", choices=("sphere-xy", "cylinder-exp"), required=True
    )
    solve_p.add_argument("--solver", choices=("direct", "iterative"), default="direct")
    solve_p.add_argument("--threads", type=int, default=None)
    solve_p.add_argument("--dump-matrices", help="directory for A.mtx, M.mtx, b.txt, xi.txt")
    solve_p.add_argument("--vtk", help="write a legacy VTK polydata snapshot")
    solve_p.add_argument("--csv", help="write a one-row error table")
    solve_p.add_argument("--plot", help="render the solution to a PNG figure")
    solve_p.set_defaults(func=cmd_solve)

    conv_p = sub.add_parser("convergence", help="run a refinement study")
    conv_p.add_argument(
        "--problem", choices=("sphere-xy", "cylinder-exp"), required=True
    )
    conv_p.add_argument(
        "--levels", default="1..6", help="sphere levels, '2..5' or '1,3,5'"
    )
    conv_p.add_argument("--n-list", default=None, help="cylinder sizes, '5,10,15'")
    conv_p.add_argument("--csv", help="write the error table to this file")
    conv_p.add_argument("--plot", help="render a log-log convergence figure")
    conv_p.add_argument("--solver", choices=("direct", "iterative"), default="direct")
    conv_p.add_argument("--threads", type=int, default=None)
    conv_p.set_defaults(func=cmd_convergence)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidParameter as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return 2
    except SvemError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - uniform fallback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
