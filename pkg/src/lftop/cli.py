"""Command-line surface over the library.

Every report is a single JSON object embedding the input digest, the
echoed parameters and the library version; identical configurations and
seeds produce byte-identical output. Exit status 0 on success, 1 on
input or computation errors (structured message on stdout), 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .digital import DigitalCurveError, box_components, jordan_decomposition, render_pgm
from .distortion import DistortionError, distortion_lower_bound_components
from .documents import (
    atomic_write_text,
    canonical_json,
    digest_document,
    load_circuit,
    load_curve,
    load_document,
    load_map,
    load_space,
    save_space,
)
from .fixtures import fixture_names, generate_fixture
from .homotopy import HomotopyError, null_homotopy_search
from .isoperimetry import (
    SubsetPolicy,
    iota_global,
    local_amenability_check,
    property_sn_locally_finite,
    zoom_constants,
    zoom_extremes,
)
from .npp import NppError, is_npp_function, is_npp_local_isomorphism, is_npp_isomorphism, subset_transport_check, symbolic_graph
from .spaces import SpaceError


@dataclass
class RunConfig:
    command: str
    space: Optional[str] = None
    curve: Optional[str] = None
    map: Optional[str] = None
    circuit: Optional[str] = None
    name: Optional[str] = None
    params: dict = field(default_factory=dict)
    k: int = 1
    kmax: int = 3
    nmax: int = 12
    max_subset: Optional[int] = None
    margin: int = 1
    p: float = 2.0
    seed: int = 0
    bounds: tuple = (12, 200000)
    point: Optional[int] = None
    edges_mode: str = "all"
    out: Optional[str] = None
    render: Optional[str] = None
    deterministic: bool = True


def _echo_params(config: RunConfig) -> dict:
    return {
        "k": config.k,
        "kmax": config.kmax,
        "nmax": config.nmax,
        "max_subset": config.max_subset,
        "margin": config.margin,
        "p": config.p,
        "seed": config.seed,
        "bounds": list(config.bounds),
        "point": config.point,
        "edges_mode": config.edges_mode,
        "deterministic": config.deterministic,
    }


def _policy(config: RunConfig) -> SubsetPolicy:
    return SubsetPolicy(max_size=config.max_subset, seed=config.seed)


def _cmd_components(config: RunConfig):
    doc = load_document(config.space)
    space = load_space(doc)
    comps = [sorted(c) for c in space.components()]
    return doc, {"count": len(comps), "components": comps}


def _cmd_homotopy_search(config: RunConfig):
    doc = load_document(config.circuit)
    space, circ = load_circuit(doc)
    width, states = config.bounds
    res = null_homotopy_search(space, circ, max_width=int(width), max_states=int(states))
    rep = {
        "status": res.status,
        "width": res.width,
        "states": res.states,
        "expansions": res.expansions,
        "widths_tried": list(res.widths_tried),
    }
    if res.certificate is not None:
        rep["certificate"] = [list(map(int, row)) for row in res.certificate]
        rep["certificate_digest"] = digest_document({"rows": rep["certificate"]})
    return doc, rep


def _cmd_npp_check(config: RunConfig):
    doc = load_document(config.map)
    pm = load_map(doc)
    ok_f, w_f = is_npp_function(pm)
    rep = {"npp_function": ok_f, "npp_function_witness": w_f}
    ok_l, w_l = is_npp_local_isomorphism(pm)
    rep["npp_local_isomorphism"] = ok_l
    rep["npp_local_isomorphism_witness"] = w_l
    if pm.is_bijective():
        ok_i, w_i = is_npp_isomorphism(pm)
        rep["npp_isomorphism"] = ok_i
        rep["npp_isomorphism_witness"] = list(w_i) if w_i else None
        if pm.domain.n <= 8:
            ok_o, w_o = subset_transport_check(pm, kmax=4)
            rep["subset_transport_oracle"] = ok_o
            rep["subset_transport_witness"] = (
                {"A": list(w_o[0]), "k": w_o[1], "lhs": list(w_o[2]), "rhs": list(w_o[3])} if w_o else None
            )
    else:
        rep["npp_isomorphism"] = None
    return doc, rep


def _cmd_symbolic_graph(config: RunConfig):
    doc = load_document(config.space)
    space = load_space(doc)
    res = symbolic_graph(space, seed=config.seed)
    rep = res.ts.document()
    rep["identity_npp_isomorphism"] = True
    rep["base_points"] = list(res.base_points)
    return doc, rep


def _cmd_iso(config: RunConfig):
    doc = load_document(config.space)
    space = load_space(doc)
    rep = iota_global(space, config.kmax, _policy(config))
    return doc, rep.as_dict()


def _cmd_zoom(config: RunConfig):
    doc = load_document(config.space)
    space = load_space(doc)
    if config.point is not None:
        rep = zoom_constants(space, config.point, config.kmax, config.nmax).as_dict()
    else:
        rep = {"extremes": zoom_extremes(space, config.kmax, config.nmax).as_dict()}
        rep["local_amenability"] = local_amenability_check(space, config.kmax, config.nmax).as_dict()
    return doc, rep


def _cmd_sn(config: RunConfig):
    doc = load_document(config.space)
    space = load_space(doc)
    verdict = property_sn_locally_finite(space, config.kmax, _policy(config))
    return doc, verdict.as_dict()


def _cmd_distortion(config: RunConfig):
    doc = load_document(config.space)
    space = load_space(doc)
    rep = distortion_lower_bound_components(space, config.p, edges_mode=config.edges_mode)
    return doc, rep.as_dict()


def _cmd_jordan(config: RunConfig):
    doc = load_document(config.curve)
    curve = load_curve(doc)
    try:
        dec = jordan_decomposition(curve, margin=config.margin)
    except DigitalCurveError as e:
        count, comps, box = box_components(curve, config.margin)
        raise CliInputError(
            str(e),
            extra={"diagnostic_component_count": count, "diagnostic_box": list(box)},
        )
    rep = dec.as_dict()
    if config.render:
        atomic_write_text(config.render, render_pgm(curve, dec))
        rep["rendered"] = config.render
    return doc, rep


def _cmd_generate_fixture(config: RunConfig):
    doc = generate_fixture(config.name, config.params)
    return {"name": config.name, "params": config.params}, doc


class CliInputError(Exception):
    def __init__(self, message, extra=None):
        super().__init__(message)
        self.extra = extra or {}


_COMMANDS = {
    "components": _cmd_components,
    "homotopy-search": _cmd_homotopy_search,
    "npp-check": _cmd_npp_check,
    "symbolic-graph": _cmd_symbolic_graph,
    "iso": _cmd_iso,
    "zoom": _cmd_zoom,
    "sn": _cmd_sn,
    "distortion": _cmd_distortion,
    "jordan": _cmd_jordan,
    "generate-fixture": _cmd_generate_fixture,
}


def cli_dispatch(config: RunConfig):
    """Route a config to its command; returns (exit_status, report dict)."""
    if config.command not in _COMMANDS:
        return 2, {"error": {"message": f"unknown command {config.command!r}"}}
    envelope = {
        "command": config.command,
        "version": __version__,
        "params": _echo_params(config),
    }
    try:
        input_doc, report = _COMMANDS[config.command](config)
        envelope["input_digest"] = digest_document(input_doc)
        envelope["report"] = report
        return 0, envelope
    except CliInputError as e:
        envelope["error"] = {"message": str(e), **e.extra}
        return 1, envelope
    except (SpaceError, HomotopyError, NppError, DistortionError, DigitalCurveError, ValueError) as e:
        envelope["error"] = {"message": str(e), "type": type(e).__name__}
        return 1, envelope


def _parse_params(text: Optional[str]) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        if not part:
            continue
        if "=" not in part:
            raise argparse.ArgumentTypeError(f"bad params entry {part!r}; use key=value")
        k, v = part.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            out[k.strip()] = v.strip()
    return out


def _parse_bounds(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("bounds must be 'width,states'")
    return (int(parts[0]), int(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lftop", description=__doc__)
    ap.add_argument("command", choices=sorted(_COMMANDS))
    ap.add_argument("--space", help="space document path")
    ap.add_argument("--curve", help="digital curve document path")
    ap.add_argument("--map", help="point map document path")
    ap.add_argument("--circuit", help="circuit document path")
    ap.add_argument("--name", help="fixture name: " + ", ".join(fixture_names()))
    ap.add_argument("--params", type=_parse_params, default={}, help="fixture params k=v,k2=v2")
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=12)
    ap.add_argument("--max-subset", dest="max_subset", type=int, default=None)
    ap.add_argument("--margin", type=int, default=1)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bounds", type=_parse_bounds, default=(12, 200000), help="width,states")
    ap.add_argument("--point", type=int, default=None)
    ap.add_argument("--edges-mode", dest="edges_mode", choices=["all", "single"], default="all")
    ap.add_argument("--out", help="write the report JSON here (atomic)")
    ap.add_argument("--render", help="jordan: write a PGM bitmap here")
    ap.add_argument("--deterministic", action="store_true", default=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        space=args.space,
        curve=args.curve,
        map=args.map,
        circuit=args.circuit,
        name=args.name,
        params=args.params,
        k=args.k,
        kmax=args.kmax,
        nmax=args.nmax,
        max_subset=args.max_subset,
        margin=args.margin,
        p=args.p,
        seed=args.seed,
        bounds=args.bounds,
        point=args.point,
        edges_mode=args.edges_mode,
        out=args.out,
        render=args.render,
        deterministic=args.deterministic,
    )
    status, report = cli_dispatch(config)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if config.out:
        if config.command == "generate-fixture" and status == 0:
            # write the bare document so it can feed the other commands
            atomic_write_text(config.out, json.dumps(report["report"], sort_keys=True, indent=2) + "\n")
        else:
            atomic_write_text(config.out, text)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
