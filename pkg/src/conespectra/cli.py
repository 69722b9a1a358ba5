"""Command-line front end.

Subcommands: eig (symmetric eigenvalues), factor and roots (real
polynomials, ascending coefficients, constant term first), pf
(nonnegative matrices on the orthant), and cone with the polyhedral
subactions dual / extremal / separate / chain.

Exit codes: 0 success, 1 input error, 2 numerical failure. JSON output
uses shortest round-trip floats; text output uses 12 significant
digits. Identical input and flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .cones import PolyhedralCone, chain_iterate, dual_cone, extremal_rays, separate
from .engine import perron_frobenius
from .errors import (
    ConeSpectraError,
    DegenerateCone,
    DimensionTooLarge,
    InconsistentDimension,
    NegativeEntry,
    NotSelfadjoint,
    PointInCone,
    ZeroPolynomial,
)
from .linalg import inf_norm, max_abs, symmetrize
from .oracle import real_roots_oracle, symmetric_spectrum_oracle, verify_factorization
from .polyfactor import factor_completely
from .polyfactor import roots as poly_roots
from .polynomial import Polynomial, format_polynomial
from .spectral import eigen_decomposition, spectral_eigenvalue

_INPUT_ERRORS = (
    NotSelfadjoint,
    NegativeEntry,
    DimensionTooLarge,
    ZeroPolynomial,
    DegenerateCone,
    PointInCone,
    InconsistentDimension,
)

_FACTOR_DEGREE_WARN = 24


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors under the exit-code contract
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_source(spec_str: str) -> str:
    if spec_str.startswith("@"):
        with open(spec_str[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return spec_str


def _clean(text: str) -> str:
    return text.replace("−", "-").strip()


def parse_matrix(text: str) -> np.ndarray:
    text = _clean(text)
    if not text:
        raise ValueError("empty matrix input")
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"bad matrix JSON: {e}") from None
    else:
        data = [[float(v) for v in line.split()] for line in text.splitlines() if line.strip()]
    A = np.asarray(data, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ValueError("matrix input must be a nonempty 2-d array")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def parse_vector(text: str) -> np.ndarray:
    text = _clean(text)
    if not text:
        raise ValueError("empty vector input")
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"bad vector JSON: {e}") from None
    else:
        data = [float(v) for v in text.replace(",", " ").split()]
    v = np.asarray(data, dtype=float)
    if v.ndim != 1 or v.size == 0 or not np.all(np.isfinite(v)):
        raise ValueError("vector input must be a finite 1-d array")
    return v


def parse_poly(text: str) -> Polynomial:
    coeffs = parse_vector(text)
    return Polynomial(coeffs)


def parse_cone(text: str) -> PolyhedralCone:
    text = _clean(text)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"bad cone JSON: {e}") from None
    if not isinstance(obj, dict) or "dim" not in obj:
        raise ValueError('cone JSON must be an object with "dim" and "generators"')
    return PolyhedralCone.from_json_dict(obj)


def _default_tol() -> float:
    raw = os.environ.get("CONE_SPECTRA_TOL")
    if raw is None:
        return 1e-10
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"CONE_SPECTRA_TOL is not a number: {raw!r}") from None


def _resolve_config(args) -> tuple[float, int, int | None]:
    tol = args.tol if args.tol is not None else _default_tol()
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    if args.max_iter < 1:
        raise ValueError("max iterations must be at least 1")
    return tol, args.max_iter, args.perturb_seed


def _run_eig(text: str, args, tol: float, max_iter: int, seed: int | None) -> dict:
    A = parse_matrix(text)
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if max_abs(A - A.T) > 1e-12 * inf_norm(A):
        raise NotSelfadjoint("matrix not symmetric")
    As = symmetrize(A)
    if args.all:
        evals, Q = eigen_decomposition(As, tol=tol, max_iter=max_iter)
        out = {"eigenvalues": [float(v) for v in evals], "basis": Q.tolist()}
    else:
        cert = spectral_eigenvalue(As, tol=tol, max_iter=max_iter, perturb_seed=seed)
        out = cert.to_json_dict()
    if args.verify:
        spectrum = symmetric_spectrum_oracle(As)
        if args.all:
            got = sorted(out["eigenvalues"])
            dev = max(abs(a - b) for a, b in zip(got, spectrum)) if len(got) == len(spectrum) else None
        else:
            dev = min(abs(out["eigenvalue"] - s) for s in spectrum)
        matched = dev is not None and dev <= 1e-7 * (1.0 + inf_norm(As))
        out["verify"] = {
            "oracle_eigenvalues": [float(s) for s in spectrum],
            "max_deviation": dev if dev is None else float(dev),
            "matched": bool(matched),
        }
    return out


def _run_factor(text: str, args, tol: float, max_iter: int) -> dict:
    p = parse_poly(text)
    if p.degree > _FACTOR_DEGREE_WARN:
        print(
            f"warning: degree {p.degree} exceeds {_FACTOR_DEGREE_WARN}; expect slow convergence",
            file=sys.stderr,
        )
    fl = factor_completely(p, tol=tol, max_iter=max_iter)
    out = fl.to_json_dict()
    if args.verify:
        rep = verify_factorization(p, fl)
        block = rep.to_json_dict()
        block["ok"] = bool(
            rep.max_relative_deviation <= 1e-8 and all(d < 0.0 for d in rep.discriminants)
        )
        out["verify"] = block
    return out


def _run_roots(text: str, args, tol: float, max_iter: int) -> dict:
    p = parse_poly(text)
    rr = poly_roots(p, tol=tol, max_iter=max_iter)
    out = rr.to_json_dict()
    if args.verify:
        brackets = real_roots_oracle(p)
        oracle_vals = [br.refined_root for br in brackets]
        got = [r["root"] for r in out["real_roots"]]
        if len(got) == len(oracle_vals):
            paired = zip(sorted(got), sorted(oracle_vals))
            dev = max((abs(a - b) for a, b in paired), default=0.0)
            scale = 1.0 + max((abs(v) for v in oracle_vals), default=0.0)
            matched = dev <= 1e-7 * scale
            dev_out: float | None = float(dev)
        else:
            matched, dev_out = False, None
        out["verify"] = {
            "oracle_real_roots": [float(v) for v in oracle_vals],
            "max_deviation": dev_out,
            "matched": bool(matched),
        }
    return out


def _run_pf(text: str, tol: float, max_iter: int, seed: int | None) -> dict:
    A = parse_matrix(text)
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    return perron_frobenius(A, tol=tol, max_iter=max_iter, perturb_seed=seed).to_json_dict()


def _run_cone(args, tol: float) -> dict:
    C = parse_cone(_read_source(args.cone))
    if args.subaction == "dual":
        return dual_cone(C, tol=tol).to_json_dict()
    if args.subaction == "extremal":
        rays = extremal_rays(C, tol=tol)
        return {"dim": C.dim, "generators": [[float(v) for v in r] for r in rays]}
    if args.subaction == "separate":
        if args.point is None:
            raise ValueError("separate needs --point")
        a = parse_vector(args.point)
        return separate(C, a, tol=tol).to_json_dict()
    if args.op is None or args.n is None:
        raise ValueError("chain needs --op and --n")
    u = parse_matrix(_read_source(args.op))
    return chain_iterate(u, C, args.n, tol=tol).to_json_dict()


def _scalar_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _text_lines(obj, key: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines: list[str] = []
        for k, v in obj.items():
            sub = f"{key}.{k}" if key else k
            lines.extend(_text_lines(v, sub))
        return lines
    if isinstance(obj, list):
        if all(not isinstance(v, (list, dict)) for v in obj):
            return [f"{key} {' '.join(_scalar_text(v) for v in obj)}".rstrip()]
        if all(isinstance(v, list) for v in obj):
            rows = ["  " + " ".join(_scalar_text(x) for x in row) for row in obj]
            return [f"{key}:"] + rows
        lines = []
        for i, v in enumerate(obj):
            lines.extend(_text_lines(v, f"{key}[{i}]"))
        return lines
    return [f"{key} {_scalar_text(obj)}"]


def _factor_display(out: dict) -> str:
    parts = []
    for entry in out.get("factors", []):
        piece = f"({format_polynomial(Polynomial(np.asarray(entry['coeffs'], dtype=float)))})"
        if entry["multiplicity"] > 1:
            piece += f"^{entry['multiplicity']}"
        parts.append(piece)
    body = "".join(parts) if parts else "1"
    scale = out.get("scale", 1.0)
    return body if scale == 1.0 else f"{_fmt(scale)} * {body}"


def _emit(out: dict, args) -> None:
    if args.format == "json":
        print(json.dumps(out, indent=2))
        return
    lines = []
    if args.cmd == "factor":
        lines.append(f"factorization {_factor_display(out)}")
    lines.extend(_text_lines(out))
    print("\n".join(lines))


def _run_single(args, tol: float, max_iter: int, seed: int | None) -> dict:
    text = _read_source(args.input)
    if args.cmd == "eig":
        return _run_eig(text, args, tol, max_iter, seed)
    if args.cmd == "factor":
        return _run_factor(text, args, tol, max_iter)
    if args.cmd == "roots":
        return _run_roots(text, args, tol, max_iter)
    return _run_pf(text, tol, max_iter, seed)


def _exit_code_for(e: Exception) -> int:
    if isinstance(e, (ValueError, OSError)) or isinstance(e, _INPUT_ERRORS):
        return 1
    return 2


def _run_batch(args, tol: float, max_iter: int, seed: int | None) -> int:
    worst = 0
    with open(args.batch, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        item = argparse.Namespace(**vars(args))
        item.input = line
        try:
            out = _run_single(item, tol, max_iter, seed)
        except (ValueError, OSError, ConeSpectraError) as e:
            code = _exit_code_for(e)
            worst = max(worst, code)
            out = {"error": {"code": code, "type": type(e).__name__, "message": str(e)}}
        print(json.dumps(out, separators=(",", ":")))
    return worst


def _build_parser() -> _Parser:
    parser = _Parser(prog="conespectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=None, help="tolerance (default env CONE_SPECTRA_TOL or 1e-10)")
        p.add_argument("--max-iter", type=int, default=10_000, dest="max_iter")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--perturb-seed", type=int, default=None, dest="perturb_seed")

    pe = sub.add_parser("eig", help="eigenvalue certificate of a symmetric matrix")
    pe.add_argument("input", nargs="?", help="matrix: JSON [[...]], whitespace grid, or @file")
    pe.add_argument("--all", action="store_true", help="full decomposition instead of one eigenvalue")
    pe.add_argument("--verify", action="store_true")
    pe.add_argument("--batch", default=None, help="file with one matrix per line")
    common(pe)

    for name, helptext in (("factor", "factor a real polynomial"), ("roots", "all roots of a real polynomial")):
        pp = sub.add_parser(name, help=helptext)
        pp.add_argument("input", nargs="?", help="ascending coefficients: comma list, JSON, or @file")
        pp.add_argument("--verify", action="store_true")
        pp.add_argument("--batch", default=None)
        common(pp)

    pf = sub.add_parser("pf", help="dominant eigenpair of a nonnegative matrix")
    pf.add_argument("input", nargs="?", help="matrix: JSON [[...]], whitespace grid, or @file")
    pf.add_argument("--batch", default=None)
    common(pf)

    pc = sub.add_parser("cone", help="polyhedral cone operations")
    pc.add_argument("subaction", choices=("dual", "extremal", "separate", "chain"))
    pc.add_argument("cone", help='cone JSON {"dim": d, "generators": [[...]]} or @file')
    pc.add_argument("--point", default=None, help="point to separate (vector)")
    pc.add_argument("--op", default=None, help="matrix for the chain (JSON or @file)")
    pc.add_argument("--n", type=int, default=None, help="chain length")
    common(pc)
    return parser


def _escape_negative_data(argv: list[str]) -> list[str]:
    # "-1,0,1" and "-1 0" are data, not flags; swap the leading dash for
    # a unicode minus so argparse passes them through (_clean undoes it)
    out = []
    for tok in argv:
        if len(tok) >= 2 and tok[0] == "-" and tok[1] in "0123456789.,":
            tok = "−" + tok[1:]
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_escape_negative_data(list(argv)))
    try:
        tol, max_iter, seed = _resolve_config(args)
        if args.cmd == "cone":
            _emit(_run_cone(args, tol), args)
            return 0
        if getattr(args, "batch", None):
            return _run_batch(args, tol, max_iter, seed)
        if args.input is None:
            raise ValueError("missing input (positional argument or --batch)")
        _emit(_run_single(args, tol, max_iter, seed), args)
        return 0
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ConeSpectraError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
