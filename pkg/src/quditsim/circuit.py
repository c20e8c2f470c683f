"""Clifford+T circuits over odd-prime qudits and their gadgetized form.

Text grammar, one statement per line, ``#`` starts a comment::

    d <prime>                first statement
    n <int>                  second statement
    X <q> [a] | Z <q> [a] | P <q> [a]
    H <q>
    CSUM <control> <target>
    T <q>                    the M_d gate
    MEASURE <q>              computational-basis measurement

Gadgetization replaces the j-th ``T q`` by a ``GADGET (q, n + j)`` op that
consumes magic-state ancilla ``n + j``:

1. measure ``Z_q Z_a^{-1}``, outcome k (eigenvalue omega^k);
2. apply ``X^{-k}`` to q;
3. apply ``CSUM^{-1}`` with control q and target a, which returns a to |0>;
4. apply ``C_d^k`` to q, where ``C_d = M_d X M_d^dag``.

Step 4 is needed because steps 1-3 leave ``M_d X^{-k}|psi>`` on the data
qudit, and ``C_d^k M_d X^{-k} = M_d``. For k = 0 nothing is corrected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field import NonPrimeDimension, check_dimension
from .stabilizer import SameQudit

CLIFFORD_GATES = {"X", "Z", "P", "H", "CSUM"}
GATE_NAMES = CLIFFORD_GATES | {"T", "MEASURE"}


class CircuitError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class CircuitSyntaxError(CircuitError):
    pass


class IndexOutOfRange(CircuitError):
    pass


class SameQuditError(CircuitError, SameQudit):
    pass


class PrimeDimensionError(CircuitError, NonPrimeDimension):
    pass


@dataclass(frozen=True)
class Gate:
    name: str
    qudits: tuple[int, ...]
    power: int = 1

    def __str__(self) -> str:
        args = " ".join(map(str, self.qudits))
        if self.name in ("X", "Z", "P") and self.power != 1:
            args += f" {self.power}"
        return f"{self.name} {args}"


@dataclass
class Circuit:
    d: int
    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        check_dimension(self.d)
        for g in self.gates:
            _validate(g, self.n)

    @property
    def t(self) -> int:
        return sum(1 for g in self.gates if g.name == "T")

    @property
    def measured(self) -> list[int]:
        return [g.qudits[0] for g in self.gates if g.name == "MEASURE"]

    def to_text(self) -> str:
        return "\n".join([f"d {self.d}", f"n {self.n}"] + [str(g) for g in self.gates]) + "\n"


def _validate(g: Gate, n: int, line: int | None = None) -> None:
    if g.name not in GATE_NAMES | {"GADGET"}:
        raise CircuitSyntaxError(f"unknown gate {g.name!r}", line)
    for q in g.qudits:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qudit {q} out of range 0..{n - 1}", line)
    if len(g.qudits) == 2 and g.qudits[0] == g.qudits[1]:
        raise SameQuditError(f"{g.name} needs two distinct qudits", line)


_ARITY = {"X": 1, "Z": 1, "P": 1, "H": 1, "T": 1, "MEASURE": 1, "CSUM": 2}


def parse(text: str) -> Circuit:
    d = n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        head = head.upper() if head.upper() in GATE_NAMES else head
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise CircuitSyntaxError(f"non-integer argument in {line!r}", lineno) from None
        if d is None:
            if head != "d" or len(nums) != 1:
                raise CircuitSyntaxError("first statement must be 'd <prime>'", lineno)
            try:
                d = check_dimension(nums[0])
            except NonPrimeDimension as exc:
                raise PrimeDimensionError(str(exc), lineno) from None
            continue
        if n is None:
            if head != "n" or len(nums) != 1 or nums[0] < 1:
                raise CircuitSyntaxError("second statement must be 'n <int>=1>'", lineno)
            n = nums[0]
            continue
        if head not in GATE_NAMES:
            raise CircuitSyntaxError(f"unknown statement {head!r}", lineno)
        arity = _ARITY[head]
        powered = head in ("X", "Z", "P")
        if not (len(nums) == arity or (powered and len(nums) == 2)):
            raise CircuitSyntaxError(f"wrong number of arguments for {head}", lineno)
        power = nums[1] % d if powered and len(nums) == 2 else 1
        g = Gate(head, tuple(nums[:arity]), power)
        _validate(g, n, lineno)
        gates.append(g)
    if d is None or n is None:
        raise CircuitSyntaxError("missing 'd' or 'n' header", None)
    return Circuit(d, n, gates)


def parse_file(path) -> Circuit:
    with open(path) as fh:
        return parse(fh.read())


@dataclass(frozen=True)
class Injection:
    t_index: int
    data: int
    ancilla: int


@dataclass
class GadgetizedCircuit:
    """Clifford ops on ``n + t`` qudits; ancillas ``n..n+t-1`` hold magic states."""

    d: int
    n: int
    t: int
    ops: list[Gate]
    injections: list[Injection]

    @property
    def width(self) -> int:
        return self.n + self.t


def gadgetize(c: Circuit) -> GadgetizedCircuit:
    ops: list[Gate] = []
    injections: list[Injection] = []
    for g in c.gates:
        if g.name == "T":
            j = len(injections)
            inj = Injection(j, g.qudits[0], c.n + j)
            injections.append(inj)
            ops.append(Gate("GADGET", (inj.data, inj.ancilla)))
        else:
            ops.append(g)
    return GadgetizedCircuit(c.d, c.n, len(injections), ops, injections)
