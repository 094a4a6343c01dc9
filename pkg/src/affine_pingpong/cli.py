"""Command line front end.

Exit status: 0 ok, 2 parse error, 3 hypothesis failure, 4 budget exhausted,
5 precision indeterminate, 6 validation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arith import AffineElement, Mat2, RationalPoint, parse_element, parse_set, symmetrize, unique_fixed_point
from .errors import ParseError, PingPongError, ValidationError

EXIT_OK = 0
EXIT_PARSE = 2


def _umask_mode() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return 0o666 & ~mask


def _atomic_write(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, _umask_mode())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render_figure(render, path: Path) -> None:
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".png", dir=path.parent)
    os.close(fd)
    try:
        render(tmp)
        os.chmod(tmp, _umask_mode())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_input(path: str | None) -> tuple[str, str]:
    if path is None or path == "-":
        raw = sys.stdin.buffer.read()
    else:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("input is not UTF-8 text") from None
    return text, hashlib.sha256(raw).hexdigest()


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "output", "input", "certificate"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out["input"] = os.path.basename(args.input) if getattr(args, "input", None) else None
    return out


def _emit_json(args, doc: dict, input_hash: str | None) -> None:
    doc = dict(doc)
    doc["run"] = {"tool_version": __version__, "config": _config(args), "input_sha256": input_hash}
    data = (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode()
    if args.output:
        _atomic_write(Path(args.output), data)
    else:
        sys.stdout.buffer.write(data)


def _sibling(output: str | None, suffix: str) -> Path | None:
    if not output:
        return None
    p = Path(output)
    return p.with_name(p.stem + suffix)


def _parse_moduli(text: str) -> list[int]:
    out: list[int] = []
    for part in filter(None, (t.strip() for t in text.split(","))):
        lo, dash, hi = part.partition("-")
        try:
            if dash:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ParseError(f"bad modulus list entry {part!r}") from None
    if any(n < 2 for n in out):
        raise ParseError("moduli must be at least 2")
    return out


def _parse_points(text: str) -> list[RationalPoint]:
    pts = []
    for part in filter(None, (t.strip() for t in text.split(";"))):
        try:
            x, y = (Fraction(v.strip()) for v in part.split(","))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad point {part!r}; expected 'x,y' with rationals") from None
        pts.append(RationalPoint(x, y))
    return pts


def _load_set(args) -> tuple[list[AffineElement], str]:
    text, digest = _read_input(args.input)
    S, added = symmetrize(parse_set(text))
    if added:
        print("warning: input was closed under inverses and the identity was added", file=sys.stderr)
    return S, digest


def _load_certificate(args):
    from .pingpong.document import load_document

    text, digest = _read_input(args.input)
    return load_document(text), digest


def _certificate_pair(doc: dict) -> tuple[AffineElement, AffineElement]:
    return parse_element(doc["pair"]["a"]), parse_element(doc["pair"]["b"])


# --- subcommands -------------------------------------------------------------------


def cmd_certify(args) -> int:
    from .pingpong import CertifyConfig, certificate_document, certify_linear_pair, certify_pair

    S, digest = _load_set(args)
    config = CertifyConfig(
        power_budget=args.power_budget, ball_cap=args.ball_cap, eta_mode=args.eta_mode, max_ell=args.max_ell
    )
    if args.linear:
        if any(g.translation != (0, 0) for g in S):
            raise ParseError("--linear needs zero translations")
        cert = certify_linear_pair([g.linear for g in S], config)
    else:
        cert = certify_pair(S, config)
    doc = certificate_document(cert)
    _emit_json(args, doc, digest)
    if cert.failed():
        raise ValidationError("certificate has failing inequalities", [q.name for q in cert.failed()])
    print(f"certified: ell={cert.ell}, word length {cert.word_length}", file=sys.stderr)
    return EXIT_OK


def cmd_recheck(args) -> int:
    from .pingpong.document import recheck

    doc, digest = _load_certificate(args)
    report = recheck(doc)
    out = {"recheck": report.to_json()}
    if args.output:
        _emit_json(args, out, digest)
    for line in report.failures:
        print(line, file=sys.stderr)
    if not report.ok:
        raise ValidationError(f"recheck failed: {report.failures[0]}", report.failures)
    print(f"recheck ok: {report.checked} inequalities", file=sys.stderr)
    return EXIT_OK


def cmd_free_check(args) -> int:
    from .pingpong.table import TableParams
    from .verify import TableGeometry, default_sample_points, validation_report

    doc, digest = _load_certificate(args)
    a, b = _certificate_pair(doc)
    geo = None
    if doc.get("kind") == "affine" and args.sample_length > 0:
        geo = TableGeometry(
            Mat2(*[int(x) for x in doc["conjugator"]]),
            parse_element(doc["a"]),
            parse_element(doc["h"]),
            int(doc["ell"]),
            TableParams.from_json(doc["params"]),
            tuple(Fraction(x) for x in doc["unit_direction"]),
        )
    report = validation_report(
        a,
        b,
        free_length=args.lfree,
        lc_length=args.lcomm,
        cert=geo,
        points=default_sample_points(args.seed, extra=args.random_points),
        sample_length=args.sample_length,
    )
    _emit_json(args, report, digest)
    if not report["pass"]:
        failed = [c["check"] for c in report["checks"] if not c["pass"]]
        raise ValidationError("validation failed: " + ", ".join(failed), failed)
    return EXIT_OK


def cmd_paradox(args) -> int:
    from .paradox import dekker_pieces, nonamenability_report, orbit_decompose, plot_rows
    from .plotting import plot_pieces

    doc, digest = _load_certificate(args)
    a, b = _certificate_pair(doc)
    seeds = _parse_points(args.points)
    orbits = orbit_decompose(a, b, seeds, args.orbit_radius)
    free = [o for o in orbits if o.free]
    assignment = dekker_pieces(free, a, b)
    try:
        phi = unique_fixed_point(a)
    except ValueError:
        phi = None
    report = {
        "orbits": [o.to_json() for o in orbits],
        "pieces": assignment.to_json(),
        "nonamenability": nonamenability_report(a, b, free, assignment, phi),
    }
    report["pass"] = assignment.ok and report["nonamenability"]["pass"]
    _emit_json(args, report, digest)
    rows = plot_rows(free)
    data_path = _sibling(args.output, ".pieces.tsv")
    if data_path is not None:
        lines = ["x_signed_log10\ty_signed_log10\tpiece\tword_length"]
        lines += [f"{x:.12g}\t{y:.12g}\t{k}\t{n}" for x, y, k, n in rows]
        _atomic_write(data_path, ("\n".join(lines) + "\n").encode())
        _render_figure(lambda p: plot_pieces(rows, p, f"orbit pieces, radius {args.orbit_radius}"), _sibling(args.output, ".pieces.png"))
    if not report["pass"]:
        raise ValidationError("paradox verification failed", ["pieces"])
    return EXIT_OK


def cmd_gap(args) -> int:
    from .plotting import plot_gap
    from .spectral import GapEstimate, margulis_set, operator_norm_est, schreier_operator

    if args.input:
        S, digest = _load_set(args)
    else:
        S, digest = margulis_set(), None
    moduli = _parse_moduli(args.moduli)
    rows: list[GapEstimate] = []
    lines = [f"# {json.dumps(_config(args), sort_keys=True)}", f"# input_sha256 {digest}"]
    lines.append("\t".join(GapEstimate.ROW_FIELDS + ("status",)))
    for n in moduli:
        try:
            est = operator_norm_est(schreier_operator(S, n, args.mode), tol=args.tol, seed=args.seed)
        except (PingPongError, MemoryError) as exc:
            lines.append("\t".join([str(n), str(len(S))] + ["nan"] * 5 + [f"failed: {exc}"]))
            continue
        rows.append(est)
        status = "ok" if est.components == 1 else f"disconnected({est.components})"
        if est.dense_agrees is False:
            status += ",dense-mismatch"
        lines.append("\t".join(est.row() + [status]))
    data = ("\n".join(lines) + "\n").encode()
    if args.output:
        _atomic_write(Path(args.output), data)
        if rows:
            _render_figure(lambda p: plot_gap(rows, p, f"{args.mode} action"), _sibling(args.output, ".png"))
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def cmd_quotient_check(args) -> int:
    from .spectral import closure_check, herz_compare

    S, digest = _load_set(args)
    moduli = _parse_moduli(args.moduli)
    results = []
    for p in moduli:
        entry = {"closure": closure_check(S, p).to_json()}
        if p <= args.herz_max:
            entry["herz"] = {k: v for k, v in herz_compare(S, p, args.tol).items() if k not in ("plane", "cayley")}
        results.append(entry)
    ok = all(r.get("herz", {}).get("holds", True) for r in results)
    _emit_json(args, {"quotients": results, "pass": ok}, digest)
    if not ok:
        raise ValidationError("Herz comparison failed", [str(r["closure"]["p"]) for r in results])
    return EXIT_OK


# --- parser ----------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _unit_interval(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affine-pingpong", description="Certified ping-pong pairs in SA(2, Z).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_help):
        p.add_argument("--input", "-i", help=input_help)
        p.add_argument("--output", "-o", help="output file (stdout when omitted)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=_unit_interval, default=1e-12)

    p = sub.add_parser("certify", help="find and certify a free, locally commutative pair")
    common(p, "generating set, one 'a11 a12 a21 a22 | tx ty' per line")
    p.add_argument("--power-budget", type=_positive, default=12)
    p.add_argument("--ball-cap", type=_positive, default=10**6)
    p.add_argument("--eta-mode", choices=("norm", "data"), default="norm")
    p.add_argument("--max-ell", type=_positive, default=10**6)
    p.add_argument("--linear", action="store_true", help="projective ping-pong for a subset of SL(2, Z)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("recheck", help="independently re-verify a certificate")
    common(p, "certificate document")
    p.add_argument("certificate", nargs="?", help="certificate document (same as --input)")
    p.set_defaults(func=cmd_recheck)

    p = sub.add_parser("free-check", help="brute-force freeness, local commutativity and table sampling")
    common(p, "certificate document")
    p.add_argument("--lfree", type=_positive, default=8)
    p.add_argument("--lcomm", type=_positive, default=6)
    p.add_argument("--sample-length", type=int, default=4, help="0 disables table sampling")
    p.add_argument("--random-points", type=int, default=200)
    p.set_defaults(func=cmd_free_check)

    p = sub.add_parser("paradox", help="four-piece decomposition on explored orbits")
    common(p, "certificate document")
    p.add_argument("--orbit-radius", type=_positive, default=6)
    p.add_argument("--points", default="1/3,1/7", help="seed points 'x,y;x,y'")
    p.set_defaults(func=cmd_paradox)

    p = sub.add_parser("gap", help="spectral gap table on finite quotients")
    common(p, "generating set (default: unit translations and the two standard unipotents)")
    p.add_argument("--moduli", default="2-10")
    p.add_argument("--mode", choices=("plane", "cayley"), default="plane")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("quotient-check", help="surjectivity mod p and plane-versus-regular norm comparison")
    common(p, "generating set")
    p.add_argument("--moduli", default="2,3,5")
    p.add_argument("--herz-max", type=int, default=5, help="largest p for the norm comparison")
    p.set_defaults(func=cmd_quotient_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "certificate", None):
        args.input = args.certificate
    args.certificate = None
    try:
        return args.func(args)
    except PingPongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
