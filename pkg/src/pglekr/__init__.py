"""Derangement graphs of PGL(2,q) and exact certification of their Erdős–Ko–Rado structure."""

__version__ = "0.1.0"

from .errors import PglEkrError  # noqa: E402
from .finite_field import GF, field_of_order  # noqa: E402
from .projective_group import GroupTable, enumerate_agl1, enumerate_pgl, enumerate_psl  # noqa: E402

__all__ = ["GF", "GroupTable", "PglEkrError", "__version__", "enumerate_agl1", "enumerate_pgl",
           "enumerate_psl", "field_of_order"]
