"""Resource bounds and tunables.

Every potentially explosive computation takes a :class:`Budgets` (or finds
the module-level default).  All bounds are plain data so they can be loaded
from a TOML/JSON config file by the CLI and threaded through unchanged.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .errors import InvalidInput


@dataclasses.dataclass
class Budgets:
    # Largest group order validate_realization will check exhaustively.
    validate_order_bound: int = 5040
    # Largest group order for subgroup-lattice style enumeration.
    enumeration_order_bound: int = 60
    # Bar-resolution degree-3 column bound: (|G|-1)^3 must stay below this.
    bar_sparse_budget: int = 10**6
    # Above this many degree-3 bar columns, H2 switches from integer SNF to
    # the multi-prime rank route.
    zsnf_max_cols: int = 4096
    # Any intermediate integer in exact elimination above this many bits
    # aborts with BudgetExceeded.
    int_bit_bound: int = 2**16
    # Node budget for the bounded elementary-reduction search on torsion
    # representatives.
    elementary_search_nodes: int = 2000
    # Documented floating-point guarantee for character magnitudes.
    float_tolerance: float = 1e-12

    def replace(self, **kw) -> "Budgets":
        return dataclasses.replace(self, **kw)


DEFAULT = Budgets()

_FIELDS = {f.name for f in dataclasses.fields(Budgets)}


def load_config(path: str | Path) -> Budgets:
    """Read a Budgets override from a ``.toml`` or ``.json`` file.

    Unknown keys are rejected rather than ignored so that typos in config
    files fail loudly.
    """
    path = Path(path)
    text = path.read_bytes()
    if path.suffix == ".toml":
        try:
            import tomllib  # py>=3.11
        except ImportError:
            import tomli as tomllib
        data = tomllib.loads(text.decode())
    elif path.suffix == ".json":
        data = json.loads(text)
    else:
        raise InvalidInput(f"config file must be .toml or .json, got {path.name!r}")
    if not isinstance(data, dict):
        raise InvalidInput("config file must contain a table/object at top level")
    bad = sorted(set(data) - _FIELDS)
    if bad:
        raise InvalidInput(f"unknown config keys: {', '.join(bad)}")
    return Budgets(**data)
