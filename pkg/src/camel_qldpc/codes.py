"""Code builders and the named presets q1..q5, e1..e5, pg1..pg5."""

from __future__ import annotations

from dataclasses import dataclass

from .css import CssCode, assemble_css
from .geometry import construct_geometry
from .qc import choose_coset_representatives, qc_pair


@dataclass(frozen=True)
class Preset:
    name: str
    family: str
    params: dict
    n: int | None = None
    k: int | None = None
    claimed_d: int | None = None


# Published (n, k, d) for the QC family (ord(sigma) = p - 1) and the EG family.
PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset("q1", "QC", {"p": 7, "sigma": 3}, 50, 12, 6),
        Preset("q2", "QC", {"p": 11, "sigma": 2}, 122, 20, 12),
        Preset("q3", "QC", {"p": 13, "sigma": 2}, 170, 24, 14),
        Preset("q4", "QC", {"p": 17, "sigma": 3}, 290, 32, 18),
        Preset("q5", "QC", {"p": 19, "sigma": 3}, 362, 36, 20),
        Preset("e1", "EG", {"kind": "EG", "s": 1}, 7, 1, 3),
        Preset("e2", "EG", {"kind": "EG", "s": 2}, 21, 3, 5),
        Preset("e3", "EG", {"kind": "EG", "s": 3}, 73, 19, 9),
        Preset("e4", "EG", {"kind": "EG", "s": 4}, 273, 111, 17),
        Preset("e5", "EG", {"kind": "EG", "s": 5}, 1057, 571, 33),
    ]
}
for _s in range(1, 6):
    PRESETS[f"pg{_s}"] = Preset(f"pg{_s}", "PG", {"kind": "PG", "s": _s})


def find_preset(family: str, params: dict) -> Preset | None:
    for preset in PRESETS.values():
        if preset.family == family and all(params.get(k) == v for k, v in preset.params.items()):
            return preset
    return None


def build_qc_code(p: int, sigma: int, ell1: int | None = None, name: str | None = None) -> CssCode:
    params = choose_coset_representatives(p, sigma, ell1=ell1)
    h1, h2 = qc_pair(params)
    meta = {"p": p, "sigma": params.sigma}
    if ell1 is not None and ell1 != params.ell // 2:
        meta["ell1"] = ell1
    preset = find_preset("QC", meta) if "ell1" not in meta else None
    return assemble_css(
        h1,
        h2,
        family="QC",
        params=meta,
        claimed_d=preset.claimed_d if preset else None,
        name=name or (preset.name if preset else None),
    )


def build_fg_code(kind: str, s: int, name: str | None = None) -> CssCode:
    kind = kind.upper()
    H = construct_geometry(kind, s).H
    meta = {"kind": kind, "s": s}
    preset = find_preset(kind, meta)
    return assemble_css(
        H,
        H,
        family=kind,
        params=meta,
        claimed_d=preset.claimed_d if preset else None,
        name=name or (preset.name if preset else None),
    )


def build_code(family: str, params: dict, name: str | None = None) -> CssCode:
    family = family.upper()
    if family == "QC":
        return build_qc_code(int(params["p"]), int(params["sigma"]), params.get("ell1"), name=name)
    if family in ("EG", "PG"):
        return build_fg_code(family, int(params["s"]), name=name)
    raise ValueError(f"unknown family {family!r}")


def preset_code(name: str) -> CssCode:
    key = name.lower()
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    preset = PRESETS[key]
    return build_code(preset.family, preset.params, name=key)
