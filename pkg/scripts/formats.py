"""
Category and representation files, and JSON reports.

Category file:

    {"category": {
        "name": "kA2",
        "field": "Q",
        "length_cutoff": 4,
        "objects": ["1", "2"],
        "arrows": [["a", "1", "2"]],
        "relations": []}}             e.g. [[[1, "b*a"], [-1, "d*c"]]]

Representation file (maps are lists of rows, keyed by total-category arrow ids):

    {"representation": {
        "category": "kA2.json",       relative to this file
        "base": "kA2.json",           optional
        "side": "left",
        "dims": {"1": 1, "2": 1},
        "maps": {"a": [[1]]}}}
"""

import hashlib
import json
import logging
import os

from .category import (Arrow, BaseChange, CategoryValidationError, Quiver, Relation, build_category, format_path,
                       parse_path)
from .cmod import ModuleValidationError, Representation, RightModule
from .linalg import Field, from_rows

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


def file_digest(path):
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as error:
        # the decoder message carries "line L column C"
        raise FormatError("{}: {}".format(path, error))


def file_kind(path):
    """"category" or "representation", by the top-level key of the file."""
    data = _read_json(path)
    for kind in ("category", "representation"):
        if isinstance(data, dict) and kind in data:
            return kind
    raise FormatError("{}: neither a category nor a representation file".format(path))


def _table(path, key):
    data = _read_json(path)
    table = data.get(key) if isinstance(data, dict) else None
    if not isinstance(table, dict):
        raise FormatError("{}: missing {!r} object".format(path, key))
    return table


def _scalar(field, value):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValueError("Scalars are integers or literal strings, got {!r}".format(value))
    return field(value)


class CategoryFile:

    def __init__(self, path, field=None):
        self.path = path
        table = _table(path, "category")
        self.name = str(table.get("name", os.path.splitext(os.path.basename(path))[0]))
        self.field = field if field is not None else self._parse_field(table.get("field", "Q"))
        self.length_cutoff = int(table.get("length_cutoff", 8))
        self.objects = [str(x) for x in self._require(table, "objects")]
        self.arrows = [self._parse_arrow(arrow) for arrow in table.get("arrows", [])]
        self.relations = [self._parse_relation(relation) for relation in table.get("relations", [])]

    def _require(self, table, key):
        if key not in table:
            raise FormatError("{}: missing key {!r}".format(self.path, key))
        return table[key]

    def _parse_field(self, name):
        try:
            return Field.from_name(str(name))
        except ValueError as error:
            raise FormatError("{}: {}".format(self.path, error))

    def _parse_arrow(self, arrow):
        if not isinstance(arrow, list) or len(arrow) != 3:
            raise FormatError("{}: arrows are [name, from, to] triples, got {!r}".format(self.path, arrow))
        return Arrow(*(str(part) for part in arrow))

    def _parse_relation(self, relation):
        terms = []
        for term in relation:
            if not isinstance(term, list) or len(term) != 2:
                raise FormatError("{}: relation terms are [coefficient, path], got {!r}".format(self.path, term))
            coefficient, path = term
            try:
                terms.append((_scalar(self.field, coefficient), parse_path(str(path))))
            except (ValueError, CategoryValidationError) as error:
                raise FormatError("{}: {}".format(self.path, error))
        return terms

    def get_category(self):
        quiver = Quiver(self.objects, self.arrows)
        relations = [Relation(terms, self.field) for terms in self.relations]
        for relation in relations:
            relation.endpoints(quiver)
        return build_category(quiver, relations, self.field, self.length_cutoff, name=self.name)


def load_category(path, field=None):
    logger.info("Loading category from %s", path)
    return CategoryFile(path, field).get_category()


class LoadedRepresentation:
    """A module read from file together with its factorization."""

    def __init__(self, module, change, side, path, inputs):
        self.module = module
        self.change = change
        self.side = side
        self.path = path
        self.inputs = inputs


class RepresentationFile:

    def __init__(self, path, field=None):
        self.path = path
        table = _table(path, "representation")
        directory = os.path.dirname(os.path.abspath(path))
        if "category" not in table:
            raise FormatError("{}: missing key 'category'".format(path))
        self.category_path = os.path.join(directory, table["category"])
        self.base_path = os.path.join(directory, table["base"]) if table.get("base") else None
        self.side = table.get("side", "left")
        if self.side not in ("left", "right"):
            raise FormatError("{}: side must be 'left' or 'right', got {!r}".format(path, self.side))
        if self.side == "right" and self.base_path:
            raise FormatError("{}: right modules take no base".format(path))
        self.field = field
        dims, maps = table.get("dims", {}), table.get("maps", {})
        if not isinstance(dims, dict) or not isinstance(maps, dict):
            raise FormatError("{}: dims and maps must be objects keyed by id".format(path))
        self.dims = {str(x): int(d) for x, d in dims.items()}
        self.maps = dict(maps)

    def _parse_matrix(self, name, rows, shape, field):
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise FormatError("{}: map {!r} must be a list of rows".format(self.path, name))
        try:
            return from_rows([[_scalar(field, value) for value in row] for row in rows], field, cols=shape[1])
        except ValueError as error:
            raise FormatError("{}: map {!r}: {}".format(self.path, name, error))

    def get_representation(self):
        category = load_category(self.category_path, self.field)
        base = load_category(self.base_path, self.field) if self.base_path else None
        change = BaseChange(category, base)
        total = change.total if self.side == "left" else category.opposite()
        field = category.field
        unknown = sorted(set(self.dims) - set(total.objects))
        if unknown:
            raise FormatError("{}: unknown object {!r}".format(self.path, unknown[0]))
        dims = {x: self.dims.get(x, 0) for x in total.objects}
        maps = {}
        for name, rows in self.maps.items():
            if name not in total.quiver.arrow_by_name:
                raise FormatError("{}: unknown arrow {!r}".format(self.path, name))
            arrow = total.quiver.arrow(name)
            shape = (dims[arrow.target], dims[arrow.source])
            maps[name] = self._parse_matrix(name, rows, shape, field)
        try:
            if self.side == "right":
                module = RightModule(category, dims, maps)
            else:
                module = Representation(total, dims, maps)
        except ModuleValidationError as error:
            raise FormatError("{}: {}".format(self.path, error))
        inputs = {os.path.basename(p): file_digest(p) for p in (self.path, self.category_path, self.base_path) if p}
        return LoadedRepresentation(module, change, self.side, self.path, inputs)


def load_representation(path, field=None):
    logger.info("Loading representation from %s", path)
    return RepresentationFile(path, field).get_representation()


def _dump(data):
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dump_category(category):
    """Serialise a category in the file format read by CategoryFile."""
    field = category.field
    relations = [[[field.literal(coefficient), format_path(path)] for coefficient, path in relation.terms]
                 for relation in category.relations]
    return _dump({"category": {
        "name": category.name or "category",
        "field": field.name,
        "length_cutoff": category.length_cutoff,
        "objects": list(category.objects),
        "arrows": [list(arrow) for arrow in category.arrows],
        "relations": relations,
    }})


def dump_representation(module, category_path, base_path=None, side="left"):
    field = module.field
    table = {"category": category_path}
    if base_path:
        table["base"] = base_path
    table["side"] = side
    table["dims"] = dict(module.dims)
    table["maps"] = {name: [[field.literal(a) for a in row] for row in matrix.to_list()]
                     for name, matrix in module.maps.items() if 0 not in matrix.shape}
    return _dump({"representation": table})


def to_jsonable(value):
    """Strings for scalars and bounds, lists for tuples, string keys everywhere."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return str(value)


def render_report(command, inputs, cutoff, result):
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "cutoff": cutoff,
        "result": to_jsonable(result),
    }
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(text, path=None):
    if path is None:
        print(text, end="")
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("Wrote report to %s", path)
