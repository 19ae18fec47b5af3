"""Tolerances and numerical knobs shared by every module."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    tol_sep: float = 1e-8
    tol_on: float = 1e-8
    v_min: float = 1e-6
    cusp_frac: float = 1e-3      # delta_cusp = cusp_frac * L
    tol_kg: float = 1e-8
    grid: int = 1024
    newton_iter: int = 50
    newton_tol: float = 1e-12
    dedup_frac: float = 1e-6     # tol_dedup = dedup_frac * L
    eps_frac: float = 1e-3       # probe offset = eps_frac * L
    tol_ang: float = 1e-4
    tol_half_pi: float = 1e-4
    kappa_bend: tuple = (1e-2, 1e-3, 1e-4)
    oracle_resolution: int = 100_000

    def replace(self, **kw) -> "Config":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["kappa_bend"] = list(self.kappa_bend)
        return d

    @classmethod
    def from_dict(cls, d: dict | None) -> "Config":
        if not d:
            return cls()
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise KeyError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(d)
        if "kappa_bend" in kw:
            kw["kappa_bend"] = tuple(kw["kappa_bend"])
        return cls(**kw)


DEFAULT = Config()
