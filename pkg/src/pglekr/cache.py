"""On-disk cache of field and group tables.

One ``.npz`` per field, keyed by ``(p, k, modulus)``, plus a JSON sidecar
holding the sha256 of the npz bytes.  A missing sidecar, a checksum
mismatch or a load error all count as corruption: the entry is rebuilt
and rewritten with a warning.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import warnings
import zipfile
from pathlib import Path

import numpy as np

from .errors import CacheCorrupt, SizeLimitExceeded
from .finite_field import GF
from .projective_group import MAX_GROUP_ORDER, GroupTable

ENV_VAR = "EKR_CACHE_DIR"
FORMAT = 1


def cache_key(F: GF) -> str:
    mod = "-".join(str(c) for c in F.modulus)
    return f"pgl2_p{F.p}_k{F.k}_m{mod}_v{FORMAT}"


def _npz_bytes(**arrays) -> bytes:
    """npz archive with fixed member timestamps, so equal tables give equal bytes."""
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_STORED) as zf:
        for name in sorted(arrays):
            member = io.BytesIO()
            np.lib.format.write_array(member, np.ascontiguousarray(arrays[name]), allow_pickle=False)
            zf.writestr(zipfile.ZipInfo(f"{name}.npy", date_time=(1980, 1, 1, 0, 0, 0)), member.getvalue())
    return buf.getvalue()


class TableCache:
    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0
        self.rebuilt = 0

    @classmethod
    def from_env(cls, disabled: bool = False) -> TableCache:
        return cls(None if disabled else os.environ.get(ENV_VAR) or None)

    def _paths(self, F: GF):
        key = cache_key(F)
        return self.dir / f"{key}.npz", self.dir / f"{key}.json"

    def _load(self, F: GF, max_order: int) -> GroupTable:
        data_path, meta_path = self._paths(F)
        if not meta_path.exists():
            raise CacheCorrupt(f"missing checksum for {data_path.name}")
        blob = data_path.read_bytes()
        meta = json.loads(meta_path.read_text())
        if hashlib.sha256(blob).hexdigest() != meta.get("sha256"):
            raise CacheCorrupt(f"checksum mismatch for {data_path.name}")
        try:
            with np.load(io.BytesIO(blob)) as z:
                arrays = {k: z[k] for k in z.files}
        except Exception as exc:  # noqa: BLE001 - any unreadable archive is corruption
            raise CacheCorrupt(f"{data_path.name}: {exc}") from exc
        if not (np.array_equal(arrays["exp"], F.exp) and np.array_equal(arrays["log"], F.log)):
            raise CacheCorrupt(f"{data_path.name}: log tables disagree with the field")
        return GroupTable(F, mats=arrays["mats"], perms=arrays["perms"], max_order=max_order)

    def _store(self, F: GF, table: GroupTable):
        self.dir.mkdir(parents=True, exist_ok=True)
        data_path, meta_path = self._paths(F)
        blob = _npz_bytes(exp=F.exp, log=F.log, mats=table.mats, perms=table.perms)
        data_path.write_bytes(blob)
        meta = {"p": F.p, "k": F.k, "modulus": list(F.modulus), "format": FORMAT,
                "sha256": hashlib.sha256(blob).hexdigest()}
        meta_path.write_text(json.dumps(meta, sort_keys=True) + "\n")

    def pgl(self, F: GF, max_order: int = MAX_GROUP_ORDER) -> GroupTable:
        order = F.q * (F.q * F.q - 1)
        if order > max_order:
            raise SizeLimitExceeded(f"|PGL(2,{F.q})| = {order} > limit {max_order}")
        if self.dir is None:
            self.misses += 1
            return GroupTable(F, max_order=max_order)
        data_path, _ = self._paths(F)
        if data_path.exists():
            try:
                table = self._load(F, max_order)
                self.hits += 1
                return table
            except CacheCorrupt as exc:
                warnings.warn(f"cache entry rebuilt: {exc}", stacklevel=2)
                self.rebuilt += 1
        self.misses += 1
        table = GroupTable(F, max_order=max_order)
        self._store(F, table)
        return table
