"""
Ground-state repository: solved profiles cached per (N, p, tolerance).
"""
from dataclasses import dataclass
import json
import logging
from pathlib import Path
from typing import Hashable, Optional

import numpy as np
import pandas as pd

from src.entities.exponents import ExponentSet, as_fraction
from src.entities.profile import QNorms, RadialProfile, ShootingOptions
from src.repositories.base import BaseRepository
from src.services.ground_state_solver import GroundStateSolver

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroundStateEntry:
    """A solved profile together with its norms and thresholds."""
    profile: RadialProfile
    norms: QNorms

    @property
    def key(self) -> tuple:
        return self.profile.key


class GroundStateRepository(BaseRepository[GroundStateEntry]):
    """
    Repository for solved ground states.

    With a cache directory, entries are also written as a profile CSV
    plus a norms JSON and reloaded by later runs.
    """

    def __init__(self, options: Optional[ShootingOptions] = None, cache_dir: Optional[Path] = None):
        super().__init__()
        self.options = options or ShootingOptions()
        self.cache_dir = Path(cache_dir) if cache_dir else None

    def _get_key(self, entity: GroundStateEntry) -> Hashable:
        """Extract (N, p, tolerance) from the profile."""
        return entity.key

    def get_or_solve(
        self, exps: ExponentSet, options: Optional[ShootingOptions] = None
    ) -> GroundStateEntry:
        """
        Return the cached ground state for exps, solving it on first use.

        Raises:
            NoBracketFound: From the shooting solver
            NotConverged: From the shooting solver
        """
        options = options or self.options
        key = (exps.N, exps.p, options.tolerance)
        entry = self.get(key)
        if entry is not None:
            return entry

        entry = self._load(key)
        if entry is None:
            profile = GroundStateSolver.solve(exps, options)
            entry = GroundStateEntry(profile, GroundStateSolver.profile_norms(profile, exps))
            self._save(entry)
        else:
            logger.info("Loaded cached ground state N=%d p=%s", exps.N, exps.p)
        return self.add(entry)

    def _stem(self, key: tuple) -> str:
        N, p, tolerance = key
        return f"groundstate_N{N}_p{str(p).replace('/', '-')}_tol{tolerance:g}"

    def _save(self, entry: GroundStateEntry) -> None:
        if self.cache_dir is None:
            return
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        stem = self._stem(entry.key)
        profile_frame(entry.profile).to_csv(
            self.cache_dir / f"{stem}.csv", index=False, float_format="%.17g", lineterminator="\n"
        )
        payload = {"profile": entry.profile.to_dict(), "norms": entry.norms.to_dict()}
        (self.cache_dir / f"{stem}.json").write_text(json.dumps(payload, indent=2, sort_keys=True))

    def _load(self, key: tuple) -> Optional[GroundStateEntry]:
        if self.cache_dir is None:
            return None
        stem = self._stem(key)
        csv_path = self.cache_dir / f"{stem}.csv"
        json_path = self.cache_dir / f"{stem}.json"
        if not (csv_path.is_file() and json_path.is_file()):
            return None
        frame = pd.read_csv(csv_path, float_precision="round_trip")
        payload = json.loads(json_path.read_text())
        meta, norms = payload["profile"], payload["norms"]
        profile = RadialProfile(
            N=int(meta["N"]),
            p=as_fraction(meta["p"]),
            r_max=float(meta["rMax"]),
            r=frame["r"].to_numpy(dtype=float),
            q=frame["q"].to_numpy(dtype=float),
            dq=frame["dq"].to_numpy(dtype=float),
            q0=float(meta["q0"]),
            converged=bool(meta["converged"]),
            tolerance=float(meta["tolerance"]),
        )
        return GroundStateEntry(
            profile=profile,
            norms=QNorms(
                mass=norms["mass"],
                grad2=norms["grad2"],
                pot=norms["pot"],
                energy=norms["energy"],
                c_gn=norms["cGn"],
                thr_energy=norms["thrEnergy"],
                thr_grad=norms["thrGrad"],
            ),
        )


def profile_frame(profile: RadialProfile) -> pd.DataFrame:
    """Profile samples as a table with columns r, q, dq."""
    return pd.DataFrame({
        "r": np.asarray(profile.r),
        "q": np.asarray(profile.q),
        "dq": np.asarray(profile.dq),
    })
