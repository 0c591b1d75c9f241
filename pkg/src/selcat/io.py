"""JSON (de)serialization of the scenario payloads."""

from __future__ import annotations

from .approx import ApproxTable, EnumOperator
from .errors import InvalidInput
from .formulas import parse, to_text
from .genericity import MonotoneFunctional
from .numbering import Enumeration, Horizon, pair, unpair
from .sequences import DiffSequence, Selector
from .structure import StructureFragment


def enumeration_from_json(data) -> Enumeration:
    """Arrays of naturals list one value per stage; objects give explicit stages."""
    if isinstance(data, dict):
        return Enumeration(tuple(data["listing"]), tuple(data["stages"]) if "stages" in data else None,
                           data.get("injective", True))
    if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                             for v in data):
        raise InvalidInput(f"enumeration must be an array of naturals, got {data!r}")
    return Enumeration(tuple(data))


def enumeration_to_json(E) -> object:
    if isinstance(E, Enumeration):
        if E.stages == tuple(range(len(E.listing))):
            return list(E.listing)
        return {"listing": list(E.listing), "stages": list(E.stages)}
    members = sorted(E.members())
    return {"listing": members, "stages": [E.entry_stage(x) for x in members]}


def sequence_from_json(data) -> DiffSequence:
    if not isinstance(data, list):
        raise InvalidInput("sequence must be an array of {A, B} records")
    try:
        return DiffSequence(tuple((enumeration_from_json(r["A"]), enumeration_from_json(r["B"]))
                                  for r in data))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad sequence record: {exc}") from None


def sequence_to_json(S: DiffSequence) -> list:
    return [{"A": enumeration_to_json(a), "B": enumeration_to_json(b)} for a, b in S.pairs]


def selector_to_json(f: Selector) -> dict:
    return {"values": [[i, v] for i, v in f.values.items()],
            "markers": [[i, m] for i, m in f.markers.items()], "bound": f.bound}


def selector_from_json(data) -> Selector:
    if isinstance(data, list):
        return Selector.from_list(data)
    return Selector({i: v for i, v in data["values"]}, data["bound"],
                    {i: m for i, m in data.get("markers", [])})


def functional_from_json(data) -> MonotoneFunctional:
    return MonotoneFunctional.of(tuple(a) for a in data)


def functional_to_json(phi: MonotoneFunctional) -> list:
    return [list(a) for a in sorted(phi.axioms, key=lambda a: (a[1], len(a[0]), a[0], a[2]))]


def fragment_to_json(frag: StructureFragment) -> dict:
    return {"domain": sorted(frag.domain),
            "values": [[k, n, v] for (k, n), v in frag.values.items()],
            "constants": list(frag.constants),
            "pending": [[n, k] for n, k in frag.pending.items()]}


def fragment_from_json(data) -> StructureFragment:
    return StructureFragment(frozenset(data["domain"]),
                             {(k, n): v for k, n, v in data["values"]},
                             tuple(data.get("constants", ())),
                             {n: k for n, k in data.get("pending", [])})


def formulas_to_json(phis) -> list:
    return [[m, to_text(phi)] for m, phi in phis.items()]


def formulas_from_json(data) -> dict:
    return {m: parse(text) for m, text in data}


def table_from_json(data) -> ApproxTable:
    return ApproxTable.from_json(data)


def table_to_json(T: ApproxTable) -> dict:
    return T.to_json()


def operator_from_json(data) -> EnumOperator:
    return EnumOperator.from_json(data)


def horizon_from_json(data) -> Horizon:
    return Horizon(int(data["stages"]), int(data["elements"]))


def codes_to_json(codes) -> list:
    return [list(unpair(z)) for z in sorted(codes)]


def codes_from_json(data) -> frozenset:
    return frozenset(pair(y, t) for y, t in data)
