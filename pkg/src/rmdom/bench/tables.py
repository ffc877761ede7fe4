"""Reference tables, digit-level comparison and table formatting."""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

ZERO_CELL = 1e-14
CORNER = "mu\\tau"
BUILTIN = {
    "Ia": "table_Ia.csv",
    "Ib": "table_Ib.csv",
    "IIa": "table_IIa.csv",
    "IIb": "table_IIb.csv",
}


@dataclass(frozen=True)
class ReferenceTable:
    """An intensity grid as printed: rows are signed cosines, columns depths."""

    mus: np.ndarray
    depths: np.ndarray
    values: np.ndarray
    places: int
    tau1: float
    depth_labels: tuple = ()
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)
    printed: int = None

    def __post_init__(self):
        if self.values.shape != (self.mus.size, self.depths.size):
            raise ValueError("reference grid is not fully populated")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("reference grid has non-finite cells")

    def value(self, mu, depth):
        i = int(np.argmin(np.abs(self.mus - mu)))
        j = int(np.argmin(np.abs(self.depths - depth)))
        return float(self.values[i, j])


def parse_depth(label, tau1, fraction=False):
    """Depth from a label: 'a/b' (or anything when ``fraction``) is a fraction of tau1."""
    label = str(label).strip()
    if label in ("tau1", "τ1"):
        return float(tau1)
    if fraction or "/" in label:
        return float(Fraction(label) * Fraction(float(tau1)))
    return float(label)


def _read_csv(stream, name):
    meta = {}
    rows = []
    for raw in stream:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body and " " not in body.split("=", 1)[0]:
                key, val = body.split("=", 1)
                meta[key.strip()] = val.strip()
            continue
        rows.append(next(csv.reader([line])))
    if len(rows) < 2:
        raise ValueError(f"{name}: no table rows")
    return meta, rows


def load_reference(source, tau1=None, name=None, default_tau1=None):
    """Read a reference CSV from a path, a built-in name (Ia, Ib, IIa, IIb) or a stream.

    ``tau1`` overrides the file's ``# tau1=`` header; ``default_tau1`` is
    used only when the header is missing.
    """
    if isinstance(source, str) and source in BUILTIN:
        path = resources.files("rmdom").joinpath("data", BUILTIN[source])
        stream = io.StringIO(path.read_text(encoding="utf-8"))
        name = name or f"Table {source}"
    elif isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            stream = io.StringIO(fh.read())
        name = name or source
    else:
        stream = source
        name = name or "<stream>"
    meta, rows = _read_csv(stream, name)
    if tau1 is None:
        if "tau1" not in meta and default_tau1 is not None:
            meta["tau1"] = repr(float(default_tau1))
        if "tau1" not in meta:
            raise ValueError(f"{name}: tau1 not given and no '# tau1=' header")
        tau1 = float(meta["tau1"])
    fraction = meta.get("depths", "absolute") == "fraction"
    header = rows[0]
    labels = tuple(h.strip() for h in header[1:])
    depths = np.array([parse_depth(h, tau1, fraction) for h in labels])
    width = len(header)
    body = rows[1:]
    for r in body:
        if len(r) != width:
            raise ValueError(f"{name}: row {r[0]!r} has {len(r)} cells, expected {width}")
    try:
        mus = np.array([float(r[0]) for r in body])
        values = np.array([[float(c) for c in r[1:]] for r in body])
    except ValueError as exc:
        raise ValueError(f"{name}: {exc}") from None
    places = int(meta.get("places", 8))
    printed = max(_significant_digits(c) for r in body for c in r[1:])
    return ReferenceTable(mus, depths, values, places, float(tau1), labels, name, meta, printed)


def _significant_digits(text):
    mantissa = text.strip().lstrip("+-").upper().split("E")[0]
    digits = mantissa.replace(".", "").lstrip("0")
    return max(len(digits), 1)


def as_reference(table, component="diffuse", places=9):
    """View a SolutionTable through the printed-table convention."""
    if isinstance(table, ReferenceTable):
        return table
    return ReferenceTable(
        mus=np.asarray(table.mus, float),
        depths=np.asarray(table.taus, float),
        values=table.display(component),
        places=places,
        tau1=table.tau1,
        depth_labels=tuple(table.depth_labels),
        name=f"computed N={table.order}",
        meta={"order": table.order, "omega_used": table.omega_used},
    )


def round_sig(value, places):
    return float(f"{value:.{places - 1}e}")


def possible_roundings(value, places, printed=None):
    """Roundings to ``places`` digits consistent with a value printed to ``printed`` digits.

    A printed value only pins the true one to half a unit of its last digit;
    when ``printed > places`` both ends of that interval are rounded, which
    avoids double-rounding false alarms on trailing 5s.
    """
    if printed is None or printed <= places or value == 0.0:
        return {round_sig(value, places)}
    exponent = int(np.floor(np.log10(abs(value))))
    half = 0.5 * 10.0 ** (exponent - printed + 1)
    return {round_sig(value - half, places), round_sig(value, places), round_sig(value + half, places)}


@dataclass
class Mismatch:
    mu: float
    depth: float
    computed: float
    reference: float


@dataclass
class ComparisonReport:
    places: int
    cells: int
    mismatches: list
    max_rel_err: float
    reference_name: str = ""

    @property
    def clean(self):
        return not self.mismatches

    def summary(self):
        head = (
            f"{self.reference_name}: {self.cells - len(self.mismatches)}/{self.cells} cells agree "
            f"to {self.places} significant digits (max rel err {self.max_rel_err:.2e})"
        )
        lines = [head]
        for m in self.mismatches:
            lines.append(
                f"  mu={m.mu:+.3f} tau={m.depth:g}: computed {m.computed:.{self.places + 1}e} "
                f"reference {m.reference:.{self.places + 1}e}"
            )
        return "\n".join(lines)


def compare(computed, ref, places, component="diffuse"):
    """Cell-by-cell agreement after rounding both grids to ``places`` significant digits.

    Exact zeros in either grid match only if both cells are below 1e-14.
    """
    comp = as_reference(computed, component)
    if comp.mus.shape != ref.mus.shape or np.any(np.abs(comp.mus - ref.mus) > 1e-12):
        raise ValueError("direction edits of the two tables do not align")
    scale = 1e-12 * max(1.0, abs(ref.tau1))
    if comp.depths.shape != ref.depths.shape or np.any(np.abs(comp.depths - ref.depths) > scale):
        raise ValueError("depth edits of the two tables do not align")
    mismatches = []
    max_rel = 0.0
    for i, mu in enumerate(ref.mus):
        for j, depth in enumerate(ref.depths):
            c = float(comp.values[i, j])
            r = float(ref.values[i, j])
            if r == 0.0 or c == 0.0:
                ok = abs(c) < ZERO_CELL and abs(r) < ZERO_CELL
            else:
                ok = bool(
                    possible_roundings(c, places, comp.printed)
                    & possible_roundings(r, places, ref.printed)
                )
                max_rel = max(max_rel, abs(c - r) / abs(r))
            if not ok:
                mismatches.append(Mismatch(float(mu), float(depth), c, r))
    return ComparisonReport(places, ref.values.size, mismatches, max_rel, ref.name)


def format_sci(value, places):
    text = f"{value:.{places - 1}E}"
    return text[1:] if text.startswith("-") and float(text) == 0.0 else text


def emit(table, fmt="text", places=8, component="diffuse"):
    """Render a table: rows by mu ascending, columns by depth ascending."""
    if not 4 <= int(places) <= 15:
        raise ValueError("places must lie in [4, 15]")
    if fmt not in ("text", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    ref = as_reference(table, component)
    rows = np.argsort(ref.mus, kind="stable")
    cols = np.argsort(ref.depths, kind="stable")
    out = io.StringIO()
    if fmt == "csv":
        out.write(f"# tau1={ref.tau1!r}\n# depths=absolute\n# places={places}\n")
        if "order" in ref.meta:
            out.write(f"# component={component}\n# order={ref.meta['order']}\n")
        out.write("mu," + ",".join(repr(float(ref.depths[j])) for j in cols) + "\n")
        for i in rows:
            cells = [format_sci(ref.values[i, j], places) for j in cols]
            out.write(f"{_format_mu(ref.mus[i])}," + ",".join(cells) + "\n")
        return out.getvalue()
    width = places + 7
    labels = ref.depth_labels or tuple(f"{d:g}" for d in ref.depths)
    heads = [_depth_heading(labels[j]) for j in cols]
    out.write(f"{CORNER:>10}  " + "  ".join(f"{h:>{width}}" for h in heads) + "\n")
    for i in rows:
        cells = [f"{format_sci(ref.values[i, j], places):>{width}}" for j in cols]
        out.write(f"{_format_mu(ref.mus[i]):>10}  " + "  ".join(cells) + "\n")
    return out.getvalue()


def _format_mu(mu):
    text = f"{mu:.3E}"
    return text if float(text) == mu else repr(float(mu))


def _depth_heading(label):
    label = str(label)
    if "/" in label:
        num, den = label.split("/", 1)
        return f"tau1/{den}" if num.strip() == "1" else f"{num.strip()}tau1/{den}"
    return label
