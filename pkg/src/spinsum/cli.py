"""Command-line entry points.

Exit codes: 0 success / all properties hold, 1 property violation,
2 input error.  All JSON output uses sorted keys, so identical configs
(and seeds) produce byte-identical reports.
"""

from __future__ import annotations

import json
import random
import sys

import click

from . import algebra as algebra_io
from . import surface as surface_io
from .algebra import (BUILTIN_NAMES, builtin_by_name, derive,
                      validate_predicates)
from .eval import Amplitude, evaluate, evaluate_raw
from .pachner import random_pachner_move
from .spin import (NS, R_TYPE, arf_invariant, classify_spin_structures,
                   is_admissible, quadratic_form, symplectic_basis)
from .surface import genus_g_closed_detail
from .tensor import BudgetExceeded
from .tft import (cylinder_closed_form, cylinder_spin, pants_closed_form,
                  pants_spin, plus_part_state_sum, statistical_sign_sum,
                  torus_closed_form, torus_spin)


def _fail(msg: str, code: int = 2):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _load_algebra(spec: str):
    try:
        if spec in BUILTIN_NAMES:
            return builtin_by_name(spec)
        return algebra_io.load(spec)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"cannot load algebra {spec!r}: {exc}")


def _load_surface(spec: str):
    try:
        return surface_io.load(spec)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"cannot load surface {spec!r}: {exc}")


def _parse_spin(surface: str, spin: str):
    """Resolve a built-in spin-surface selector.

    cylinder/torus: "NS+", "NS-", "R+", "R-".
    pants: "D1,D2,D3:EE" with D in {NS,R} and E in {+,-}, e.g. "NS,R,R:+-".
    Returns (tri, signs, types or None for closed surfaces).
    """
    eps_of = {"+": 1, "-": -1}
    try:
        if surface in ("cylinder", "torus"):
            delta, eps_c = spin[:-1], spin[-1]
            if delta not in (NS, R_TYPE) or eps_c not in eps_of:
                raise ValueError(f"bad spin selector {spin!r}")
            if surface == "cylinder":
                return cylinder_spin(delta, eps_of[eps_c])
            tri, signs = torus_spin(delta, eps_of[eps_c])
            return tri, signs, None
        if surface == "pants":
            dpart, epart = spin.split(":")
            deltas = tuple(dpart.split(","))
            if len(deltas) != 3 or len(epart) != 2:
                raise ValueError(f"bad spin selector {spin!r}")
            return pants_spin(deltas, eps_of[epart[0]], eps_of[epart[1]])
    except (ValueError, KeyError, IndexError) as exc:
        _fail(str(exc))
    _fail(f"no built-in spin selectors for surface {surface!r}")


def _amplitude_json(amp: Amplitude, A) -> dict:
    F = A.field
    entries = sorted((list(k), F.format(v)) for k, v in amp.tensor.data.items())
    out = {
        "boundaries": amp.boundaries,
        "legs": [list(lbl) for lbl in amp.leg_labels],
        "entries": [[k, v] for k, v in entries],
    }
    if amp.boundaries == 0:
        out["scalar"] = F.format(amp.scalar_value())
    if amp.types:
        out["types"] = list(amp.types)
    return out


def _emit(obj: dict, output: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    click.echo(text)


@click.group()
def main():
    """Exact spin-surface state sums."""


@main.command("validate-algebra")
@click.option("--builtin", "builtin_name", type=click.Choice(BUILTIN_NAMES))
@click.option("--file", "file_path", type=str, default=None,
              help="Algebra JSON file (alternative to --builtin).")
@click.option("--output", type=str, default=None)
def cmd_validate_algebra(builtin_name, file_path, output):
    """Check the structure predicates of an algebra."""
    if (builtin_name is None) == (file_path is None):
        _fail("give exactly one of --builtin / --file")
    A = _load_algebra(builtin_name or file_path)
    report = validate_predicates(A)
    # "symmetric" and "nakayama_times_id_zero" are diagnostics, not
    # requirements; an algebra is usable iff the structural checks hold.
    structural = ("associative", "unital", "frobenius", "delta_separable",
                  "nakayama_involution", "counital", "convolution_unit")
    ok = all(report[k] for k in structural)
    _emit({"algebra": A.name, "predicates": report, "all": ok}, output)
    sys.exit(0 if ok else 1)


@main.command("amplitude")
@click.option("--algebra", required=True,
              help="Built-in name or algebra JSON file.")
@click.option("--surface", required=True,
              help="cylinder | torus | pants | surface JSON file.")
@click.option("--spin", default=None,
              help='Built-in spin selector, e.g. "NS+" or "NS,R,R:+-".')
@click.option("--signs", "signs_path", default=None,
              help="JSON file {edge id: +1/-1} (for file surfaces).")
@click.option("--types", "types_csv", default=None,
              help="Comma-separated boundary types, e.g. NS,R.")
@click.option("--raw", is_flag=True,
              help="Evaluate without the admissibility check.")
@click.option("--oracle", is_flag=True,
              help="Also evaluate the matching closed form and compare.")
@click.option("--output", type=str, default=None)
def cmd_amplitude(algebra, surface, spin, signs_path, types_csv, raw,
                  oracle, output):
    """Evaluate the state sum of a spin surface."""
    A = _load_algebra(algebra)
    if surface in ("cylinder", "torus", "pants"):
        if spin is None:
            _fail(f"built-in surface {surface!r} needs --spin")
        tri, signs, types = _parse_spin(surface, spin)
    else:
        tri = _load_surface(surface)
        if signs_path is None:
            _fail("file surfaces need --signs")
        try:
            with open(signs_path) as fh:
                raw_signs = json.load(fh)
            signs = {int(k): int(v) for k, v in raw_signs.items()}
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            _fail(f"cannot load signs: {exc}")
        types = tuple(types_csv.split(",")) if types_csv else None
    try:
        if raw:
            amp = evaluate_raw(tri, signs, A)
        else:
            tp = tuple(types) if types else ()
            if len(tp) != len(tri.boundaries):
                _fail("admissible evaluation needs one type per boundary "
                      "(use --raw for closed or untyped runs)"
                      if tri.boundaries else "")
            amp = evaluate(tri, signs, tp, A)
    except BudgetExceeded as exc:
        _fail(f"budget exceeded: {exc}")
    except ValueError as exc:
        _fail(str(exc))
    report = {"algebra": A.name, "surface": surface,
              "amplitude": _amplitude_json(amp, A)}
    code = 0
    if oracle:
        closed = _closed_form_for(A, surface, spin)
        if closed is None:
            _fail(f"no closed form available for surface {surface!r}")
        equal = (closed == amp if isinstance(closed, Amplitude)
                 else closed == amp.scalar_value())
        report["oracle"] = "equal" if equal else "MISMATCH"
        if not equal:
            code = 1
    _emit(report, output)
    sys.exit(code)


def _closed_form_for(A, surface, spin):
    eps_of = {"+": 1, "-": -1}
    if surface == "cylinder":
        return cylinder_closed_form(A, spin[:-1], eps_of[spin[-1]])
    if surface == "torus":
        return torus_closed_form(A, spin[:-1], eps_of[spin[-1]])
    if surface == "pants":
        dpart, epart = spin.split(":")
        return pants_closed_form(A, tuple(dpart.split(",")),
                                 eps_of[epart[0]], eps_of[epart[1]])
    return None


@main.command("classify")
@click.option("--surface", required=True,
              help="sphere | torus | genus-G | surface JSON file.")
@click.option("--output", type=str, default=None)
def cmd_classify(surface, output):
    """Classify the spin structures of a closed surface."""
    detail = None
    if surface == "sphere":
        detail = genus_g_closed_detail(0)
    elif surface == "torus":
        detail = genus_g_closed_detail(1)
    elif surface.startswith("genus-"):
        try:
            detail = genus_g_closed_detail(int(surface.split("-", 1)[1]))
        except (ValueError, NotImplementedError) as exc:
            _fail(str(exc))
    tri = detail.tri if detail else _load_surface(surface)
    if not tri.is_closed():
        _fail("classification needs a closed surface")
    try:
        reps = classify_spin_structures(tri)
    except RuntimeError as exc:
        _fail(str(exc), code=1)
    classes = []
    for signs in reps:
        entry = {"signs": {str(e): s for e, s in sorted(signs.items())}}
        if detail is not None and detail.g <= 2:
            basis = symplectic_basis(detail)
            entry["arf"] = arf_invariant(detail, signs, basis)
            entry["q"] = [[quadratic_form(tri, signs, a),
                           quadratic_form(tri, signs, b)] for a, b in basis]
        classes.append(entry)
    _emit({"surface": surface, "genus": tri.genus(),
           "count": len(classes), "classes": classes}, output)
    sys.exit(0)


def run_pachner_fuzz(tri, signs, types, A, seed: int, n_moves: int,
                     check_every: int = 25):
    """Random Pachner walk asserting exact amplitude invariance.

    Returns (ok, move_log, n_checks); on failure the log ends at the
    first checkpoint whose amplitude differs.
    """
    rng = random.Random(seed)
    base = evaluate_raw(tri, signs, A)
    bias = len(tri.triangles)
    log = []
    checks = 0
    for step in range(1, n_moves + 1):
        tri, signs, move = random_pachner_move(tri, signs, rng,
                                               bias_faces=bias)
        log.append((move.kind, move.target, list(move.choice)))
        if step % check_every == 0 or step == n_moves:
            checks += 1
            if evaluate_raw(tri, signs, A) != base:
                return False, log, checks
    return True, log, checks


@main.command("pachner-fuzz")
@click.option("--algebra", required=True)
@click.option("--surface", required=True,
              help='cylinder | torus | pants (with --spin) or a JSON file '
                   'plus --signs.')
@click.option("--spin", default=None)
@click.option("--signs", "signs_path", default=None)
@click.option("--seed", type=int, default=1)
@click.option("--moves", type=int, default=200)
@click.option("--check-every", type=int, default=25)
@click.option("--output", type=str, default=None)
def cmd_pachner_fuzz(algebra, surface, spin, signs_path, seed, moves,
                     check_every, output):
    """Fuzz amplitude invariance under random Pachner moves."""
    A = _load_algebra(algebra)
    if surface in ("cylinder", "torus", "pants"):
        if spin is None:
            _fail(f"built-in surface {surface!r} needs --spin")
        tri, signs, types = _parse_spin(surface, spin)
    else:
        tri = _load_surface(surface)
        if signs_path is None:
            _fail("file surfaces need --signs")
        with open(signs_path) as fh:
            signs = {int(k): int(v) for k, v in json.load(fh).items()}
        types = None
    ok, log, checks = run_pachner_fuzz(tri, signs, types, A, seed, moves,
                                       check_every)
    report = {"algebra": A.name, "surface": surface, "seed": seed,
              "moves": len(log), "checks": checks,
              "result": "pass" if ok else "FAIL"}
    if not ok:
        report["move_log"] = [list(m) for m in log]
    _emit(report, output)
    sys.exit(0 if ok else 1)


@main.command("sign-scan")
@click.option("--algebra", required=True)
@click.option("--surface", default="torus",
              help="torus | sphere | surface JSON file (closed).")
@click.option("--output", type=str, default=None)
def cmd_sign_scan(algebra, surface, output):
    """Weighted sum over all sign assignments vs. the oriented A+ value."""
    A = _load_algebra(algebra)
    if surface == "torus":
        tri = torus_spin(NS, 1)[0]
    elif surface == "sphere":
        tri = genus_g_closed_detail(0).tri
    else:
        tri = _load_surface(surface)
    if not tri.is_closed():
        _fail("sign scan needs a closed surface")
    F = A.field
    try:
        total = statistical_sign_sum(tri, A)
        oriented = plus_part_state_sum(tri, A)
    except ValueError as exc:
        _fail(str(exc))
    equal = total == oriented
    # per-class contributions for the report
    classes = []
    for signs in classify_spin_structures(tri):
        amp = evaluate_raw(tri, signs, A)
        classes.append(F.format(amp.scalar_value()))
    _emit({"algebra": A.name, "surface": surface,
           "weighted_sum": F.format(total),
           "oriented_value": F.format(oriented),
           "equal": equal,
           "class_amplitudes": classes}, output)
    sys.exit(0 if equal else 1)


if __name__ == "__main__":
    main()
