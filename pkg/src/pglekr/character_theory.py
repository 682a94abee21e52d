"""Character tables of PGL(2,q) and the derangement-graph spectrum.

Values are floating complex numbers with a recorded symbolic form.  Every
decision taken from them (eigenvalues, multiplicities) is snapped to an
exact rational with denominator at most 2 and fails loudly otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NonHalfIntegerEigenvalue, NonNegativeTau, OrthogonalityViolation
from .finite_field import field_of_order
from .projective_group import IDENTITY, NONSPLIT, SPLIT, UNIPOTENT, ClassLabel, GroupTable, enumerate_pgl

LAMBDA1, LAMBDA_1, PSI1, PSI_1, ETA, NU = "lambda1", "lambda-1", "psi1", "psi-1", "eta", "nu"

SNAP_TOL = 1e-6
ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class CharacterLabel:
    kind: str
    j: int = 0

    def __str__(self):
        return f"{self.kind}[{self.j}]" if self.kind in (ETA, NU) else self.kind


def orbit_reps(order: int) -> list[int]:
    """``j`` in ``1..`` with ``j < order - j`` and ``2j != 0 mod order``.

    One representative per pair ``{chi, chi^-1}`` of characters of a cyclic
    group of the given order, skipping those of order at most 2.
    """
    return [j for j in range(1, order) if j < order - j and (2 * j) % order]


@dataclass
class CharacterTable:
    q: int
    classes: list[ClassLabel]
    sizes: np.ndarray
    characters: list[CharacterLabel]
    values: np.ndarray  # (characters, classes), complex
    symbols: list[list[str]]
    representatives: list[int] = field(default_factory=list)

    @property
    def group_order(self) -> int:
        return self.q * (self.q**2 - 1)

    @property
    def degrees(self) -> np.ndarray:
        return np.rint(self.values[:, 0].real).astype(np.int64)

    def class_index(self, label: ClassLabel) -> int:
        return self.classes.index(label)

    def char_index(self, label: CharacterLabel) -> int:
        return self.characters.index(label)

    def value(self, chi: CharacterLabel, label: ClassLabel) -> complex:
        return complex(self.values[self.char_index(chi), self.class_index(label)])

    def derangement_classes(self) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c.kind == NONSPLIT]

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "group_order": self.group_order,
            "classes": [{"label": str(c), "kind": c.kind, "exp": c.exp, "size": int(s)}
                        for c, s in zip(self.classes, self.sizes)],
            "characters": [
                {
                    "label": str(chi),
                    "degree": int(self.degrees[i]),
                    "values": [[_clean(v.real), _clean(v.imag)] for v in self.values[i]],
                    "symbolic": self.symbols[i],
                }
                for i, chi in enumerate(self.characters)
            ],
        }


def _clean(x: float) -> float:
    x = round(float(x), 12)
    return 0.0 if x == 0 else x


def _cos_term(coeff: int, m: int, order: int) -> tuple[complex, str]:
    value = coeff * math.cos(2 * math.pi * m / order)
    return complex(value, 0.0), f"{coeff:+d}cos(2pi*{m}/{order})"


def build_table(q: int, table: GroupTable | None = None) -> CharacterTable:
    """Exact class data and character values for PGL(2,q).

    Class sizes and the epsilon signs are read off the actual group (sizes
    by tallying ``classify`` over all elements, signs from the PSL
    membership of a class representative).
    """
    if table is None:
        table = enumerate_pgl(field_of_order(q))
    odd = q % 2 == 1
    labels = table.labels
    tally: dict[ClassLabel, list[int]] = {}
    for i, lab in enumerate(labels):
        tally.setdefault(lab, []).append(i)
    classes = sorted(tally, key=ClassLabel.sort_key)
    sizes = np.array([len(tally[c]) for c in classes], dtype=np.int64)
    reps = [tally[c][0] for c in classes]
    eps = [1 if table.psl_mask[r] else -1 for r in reps]

    chars: list[CharacterLabel] = [CharacterLabel(LAMBDA1)]
    if odd:
        chars.append(CharacterLabel(LAMBDA_1))
    chars.append(CharacterLabel(PSI1))
    if odd:
        chars.append(CharacterLabel(PSI_1))
    chars += [CharacterLabel(ETA, j) for j in orbit_reps(q + 1)]
    chars += [CharacterLabel(NU, j) for j in orbit_reps(q - 1)]

    vals = np.zeros((len(chars), len(classes)), dtype=complex)
    syms = [["" for _ in classes] for _ in chars]
    for ci, chi in enumerate(chars):
        for k, (cl, e) in enumerate(zip(classes, eps)):
            v, s = _entry(q, chi, cl, e)
            vals[ci, k] = v
            syms[ci][k] = s
    return CharacterTable(q, classes, sizes, chars, vals, syms, reps)


def _entry(q: int, chi: CharacterLabel, cl: ClassLabel, eps: int) -> tuple[complex, str]:
    kind = cl.kind
    if chi.kind == LAMBDA1:
        return 1, "1"
    if chi.kind == LAMBDA_1:
        return (1, "1") if kind in (IDENTITY, UNIPOTENT) else (eps, str(eps))
    if chi.kind in (PSI1, PSI_1):
        sign = 1 if chi.kind == PSI1 else eps
        if kind == IDENTITY:
            return q, str(q)
        if kind == UNIPOTENT:
            return 0, "0"
        v = sign if kind == SPLIT else -sign
        return v, str(v)
    if chi.kind == ETA:
        if kind == IDENTITY:
            return q - 1, str(q - 1)
        if kind == UNIPOTENT:
            return -1, "-1"
        if kind == SPLIT:
            return 0, "0"
        # -beta(r) - beta(r^-1); on the order-2 coset this is -2 beta(i)
        return _cos_term(-2, chi.j * cl.exp, q + 1)
    if chi.kind == NU:
        if kind == IDENTITY:
            return q + 1, str(q + 1)
        if kind == UNIPOTENT:
            return 1, "1"
        if kind == NONSPLIT:
            return 0, "0"
        return _cos_term(2, chi.j * cl.exp, q - 1)
    raise ValueError(chi)


def verify_orthogonality(ct: CharacterTable, tol: float = ORTHO_TOL) -> dict:
    """Row and column orthogonality; raises OrthogonalityViolation past ``tol``."""
    n = ct.group_order
    X = ct.values
    w = ct.sizes.astype(float)
    inner = (X * w) @ X.conj().T / n
    row_dev = float(np.abs(inner - np.eye(len(X))).max())
    col = X.conj().T @ X
    col_dev = float(np.abs(col - np.diag(n / w)).max() / n)
    degree_sum = int((ct.degrees**2).sum())
    report = {
        "q": ct.q,
        "row_max_deviation": row_dev,
        "column_max_deviation": col_dev,
        "sum_degree_squares": degree_sum,
        "group_order": n,
        "square_table": len(ct.characters) == len(ct.classes),
    }
    if row_dev > tol or col_dev > tol or degree_sum != n or not report["square_table"]:
        raise OrthogonalityViolation(json.dumps(report))
    return report


def snap_half_integer(x: float, tol: float = SNAP_TOL) -> Fraction:
    f = Fraction(round(2 * x), 2)
    if abs(float(f) - x) > tol:
        raise NonHalfIntegerEigenvalue(f"{x} is not within {tol} of a half-integer")
    return f


def derangement_eigenvalue(ct: CharacterTable, chi: CharacterLabel | int) -> Fraction:
    """``chi(D) / chi(1)``: the eigenvalue of the derangement graph afforded by ``chi``."""
    ci = chi if isinstance(chi, int) else ct.char_index(chi)
    der = ct.derangement_classes()
    total = complex((ct.values[ci, der] * ct.sizes[der]).sum())
    if abs(total.imag) > SNAP_TOL:
        raise NonHalfIntegerEigenvalue(f"non-real character sum {total}")
    return snap_half_integer(total.real / ct.values[ci, 0].real)


@dataclass
class SpectrumEntry:
    eigenvalue: Fraction
    multiplicity: int
    characters: list[str]
    dimensions: list[int]


def spectrum(q: int, ct: CharacterTable | None = None) -> list[SpectrumEntry]:
    """Eigenvalues with multiplicities, sorted by decreasing eigenvalue."""
    ct = ct or build_table(q)
    groups: dict[Fraction, SpectrumEntry] = {}
    for ci, chi in enumerate(ct.characters):
        ev = derangement_eigenvalue(ct, ci)
        dim = int(ct.degrees[ci]) ** 2
        entry = groups.setdefault(ev, SpectrumEntry(ev, 0, [], []))
        entry.multiplicity += dim
        entry.characters.append(str(chi))
        entry.dimensions.append(dim)
    return sorted(groups.values(), key=lambda e: -e.eigenvalue)


def spectrum_dict(entries: list[SpectrumEntry]) -> dict[Fraction, int]:
    return {e.eigenvalue: e.multiplicity for e in entries}


def hoffman_bound(valency, tau, order: int) -> Fraction:
    valency, tau = Fraction(valency), Fraction(tau)
    if tau >= 0:
        raise NonNegativeTau(f"tau = {tau} must be negative")
    return Fraction(order) / (1 - valency / tau)


def spectrum_closed_form(q: int) -> dict[Fraction, int]:
    """Closed-form eigenvalues and multiplicities, merged where they coincide.

    For even q the eta/nu dimensions come from character counts
    (q/2 etas of degree q-1, q/2 - 1 nus of degree q+1).
    """
    F = Fraction
    out: dict[Fraction, int] = {}

    def add(ev, dim):
        out[F(ev)] = out.get(F(ev), 0) + dim

    add(F(q * q * (q - 1), 2), 1)
    add(F(-q * (q - 1), 2), q * q)
    if q % 2:
        add(F(-q * (q - 1), 2), 1)
        add(F(q - 1, 2), q * q)
        add(q, (q - 1) ** 3 // 2)
        add(0, (q + 1) ** 2 * (q - 3) // 2)
    else:
        add(q, (q // 2) * (q - 1) ** 2)
        add(0, (q // 2 - 1) * (q + 1) ** 2)
    return {k: v for k, v in out.items() if v}


def class_index_array(table: GroupTable, ct: CharacterTable) -> np.ndarray:
    """Class index of every group element (by id)."""
    pos = {c: i for i, c in enumerate(ct.classes)}
    return np.array([pos[lab] for lab in table.labels], dtype=np.int64)
