"""
Finite k-linear categories presented by a quiver with relations.

A path is a tuple of arrow names in traversal order; in files and labels it is
written in composition order, so "b*a" is the path "a then b". Hom spaces are
computed by reducing the span of paths of bounded length modulo the relations,
and composition is stored as structure constants:

    comp[(x, y, z)][i][j]  =  basis_i(x, y) followed by basis_j(y, z), in basis(x, z)

Example:
    quiver = Quiver(["1", "2"], [Arrow("a", "1", "2")])
    category = build_category(quiver, [], Field(0), length_cutoff=4)
    category.hom_dimension_table()   # {("1", "1"): 1, ("1", "2"): 1, ("2", "1"): 0, ("2", "2"): 1}
"""

import logging
from collections import namedtuple
from itertools import product

from .linalg import FieldMismatchError, add, from_columns, from_rows, identity, multiply, rref, scale, zeros

logger = logging.getLogger(__name__)

TENSOR_SEPARATOR = "|"

Arrow = namedtuple("Arrow", ["name", "source", "target"])


class CategoryValidationError(ValueError):
    pass


class PossiblyInfiniteDimensionalError(CategoryValidationError):

    def __init__(self, pair, path, length_cutoff):
        self.pair = pair
        self.path = path
        self.length_cutoff = length_cutoff
        super().__init__("Hom({}, {}) still grows at length cutoff {}: path {} does not reduce".format(
            pair[0], pair[1], length_cutoff, format_path(path, pair[0])))


def format_path(path, source=None):
    if not path:
        return "1_{}".format(source) if source is not None else "1"
    return "*".join(reversed(path))


def parse_path(text):
    text = text.strip()
    if not text:
        raise CategoryValidationError("Empty path")
    names = [name.strip() for name in text.split("*")]
    if not all(names):
        raise CategoryValidationError("Malformed path {!r}".format(text))
    return tuple(reversed(names))


class Quiver:

    def __init__(self, objects, arrows):
        self.objects = tuple(str(x) for x in objects)
        self.arrows = tuple(Arrow(*arrow) for arrow in arrows)
        if len(set(self.objects)) != len(self.objects):
            raise CategoryValidationError("Duplicate object ids in {}".format(list(self.objects)))
        names = [arrow.name for arrow in self.arrows]
        if len(set(names)) != len(names):
            raise CategoryValidationError("Duplicate arrow ids in {}".format(names))
        clashes = set(names) & set(self.objects)
        if clashes:
            raise CategoryValidationError("Ids used both for objects and arrows: {}".format(sorted(clashes)))
        object_set = set(self.objects)
        for arrow in self.arrows:
            if arrow.source not in object_set or arrow.target not in object_set:
                raise CategoryValidationError("Arrow {} has an unknown endpoint ({} -> {})".format(
                    arrow.name, arrow.source, arrow.target))
        self.arrow_by_name = {arrow.name: arrow for arrow in self.arrows}

    def arrow(self, name):
        try:
            return self.arrow_by_name[name]
        except KeyError:
            raise CategoryValidationError("Unknown arrow {!r}".format(name))

    def endpoints(self, path, source=None):
        """Source and target of a path; the empty path needs an explicit source."""
        if not path:
            if source is None:
                raise CategoryValidationError("The empty path needs a source object")
            return source, source
        arrows = [self.arrow(name) for name in path]
        for first, second in zip(arrows, arrows[1:]):
            if first.target != second.source:
                raise CategoryValidationError("Path {} is not composable at {}".format(
                    format_path(path), first.name))
        return arrows[0].source, arrows[-1].target

    def arrows_from(self, x):
        return [arrow for arrow in self.arrows if arrow.source == x]

    def arrows_into(self, x):
        return [arrow for arrow in self.arrows if arrow.target == x]

    def loops(self):
        return [arrow for arrow in self.arrows if arrow.source == arrow.target]

    def paths_up_to(self, length):
        """All paths of length <= length, grouped by (source, target)."""
        paths = {(x, y): [] for x in self.objects for y in self.objects}
        frontier = []
        for x in self.objects:
            paths[(x, x)].append(())
            frontier.append((x, x, ()))
        for _ in range(length):
            next_frontier = []
            for source, end, path in frontier:
                for arrow in self.arrows_from(end):
                    extended = path + (arrow.name,)
                    paths[(source, arrow.target)].append(extended)
                    next_frontier.append((source, arrow.target, extended))
            frontier = next_frontier
        return paths

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.objects, self.arrows) == (other.objects, other.arrows)

    def __hash__(self):
        return hash((self.objects, self.arrows))


class Relation:
    """A linear combination of parallel nonempty paths; zero coefficients are dropped."""

    def __init__(self, terms, field):
        merged = {}
        for coefficient, path in terms:
            path = tuple(path)
            if not path:
                raise CategoryValidationError("Relation terms must be nonempty paths")
            merged[path] = merged.get(path, field.zero) + field(coefficient)
        self.terms = tuple((coefficient, path) for path, coefficient in merged.items() if coefficient != field.zero)
        if not self.terms:
            raise CategoryValidationError("Relation has no nonzero term")

    def endpoints(self, quiver):
        ends = {quiver.endpoints(path) for _, path in self.terms}
        if len(ends) != 1:
            raise CategoryValidationError("Relation terms not parallel: {}".format(self))
        return ends.pop()

    def reversed(self):
        relation = Relation.__new__(Relation)
        relation.terms = tuple((coefficient, tuple(reversed(path))) for coefficient, path in self.terms)
        return relation

    def __eq__(self, other):
        return isinstance(other, Relation) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return " + ".join("{}*({})".format(coefficient, format_path(path)) for coefficient, path in self.terms)


class BoundQuiverCategory:

    def __init__(self, quiver, relations, field, length_cutoff, basis, comp, name=None, arrow_vectors=None):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field
        self.length_cutoff = length_cutoff
        self.basis = basis
        self.comp = comp
        self.name = name
        self.index = {pair: {word: i for i, word in enumerate(words)} for pair, words in basis.items()}
        self.identity_index = {x: self.index[(x, x)][()] for x in quiver.objects}
        self.arrow_vectors = dict(arrow_vectors or {})
        for arrow in quiver.arrows:
            if arrow.name in self.arrow_vectors:
                continue
            vector = [field.zero] * self.dim(arrow.source, arrow.target)
            vector[self.index[(arrow.source, arrow.target)][(arrow.name,)]] = field.one
            self.arrow_vectors[arrow.name] = vector
        self._opposite = None

    @property
    def objects(self):
        return self.quiver.objects

    @property
    def arrows(self):
        return self.quiver.arrows

    def dim(self, x, y):
        return len(self.basis[(x, y)])

    def total_dim(self):
        return sum(len(words) for words in self.basis.values())

    def hom_dimension_table(self):
        return {(x, y): self.dim(x, y) for x in self.objects for y in self.objects}

    def identity_vector(self, x):
        vector = [self.field.zero] * self.dim(x, x)
        vector[self.identity_index[x]] = self.field.one
        return vector

    def basis_vector(self, x, y, i):
        vector = [self.field.zero] * self.dim(x, y)
        vector[i] = self.field.one
        return vector

    def path_label(self, x, y, i):
        return format_path(self.basis[(x, y)][i], x)

    def compose(self, u, v, x, y, z):
        """The element "u then v" of C(x, z) for u in C(x, y) and v in C(y, z)."""
        table = self.comp[(x, y, z)]
        result = [self.field.zero] * self.dim(x, z)
        for i, a in enumerate(u):
            if a == self.field.zero:
                continue
            for j, b in enumerate(v):
                if b == self.field.zero:
                    continue
                for k, c in enumerate(table[i][j]):
                    if c != self.field.zero:
                        result[k] += a * b * c
        return result

    def normal_form(self, path, source=None):
        """The element of C(x, y) represented by a path."""
        x, _ = self.quiver.endpoints(path, source)
        vector = self.identity_vector(x)
        current = x
        for name in path:
            arrow = self.quiver.arrow(name)
            vector = self.compose(vector, self.arrow_vectors[name], x, current, arrow.target)
            current = arrow.target
        return vector

    def evaluate_relation(self, relation):
        x, y = relation.endpoints(self.quiver)
        total = [self.field.zero] * self.dim(x, y)
        for coefficient, path in relation.terms:
            for k, c in enumerate(self.normal_form(path)):
                total[k] += coefficient * c
        return total

    def precomposition_matrix(self, g, x, y, z):
        """Matrix of C(y, z) -> C(x, z), h |-> "g then h", for g in C(x, y)."""
        table = self.comp[(x, y, z)]
        columns = []
        for j in range(self.dim(y, z)):
            column = [self.field.zero] * self.dim(x, z)
            for i, a in enumerate(g):
                if a != self.field.zero:
                    for k, c in enumerate(table[i][j]):
                        column[k] += a * c
            columns.append(column)
        return from_columns(columns, self.dim(x, z), self.field)

    def postcomposition_matrix(self, g, x, y, z):
        """Matrix of C(x, y) -> C(x, z), h |-> "h then g", for g in C(y, z)."""
        table = self.comp[(x, y, z)]
        columns = []
        for i in range(self.dim(x, y)):
            column = [self.field.zero] * self.dim(x, z)
            for j, a in enumerate(g):
                if a != self.field.zero:
                    for k, c in enumerate(table[i][j]):
                        column[k] += a * c
            columns.append(column)
        return from_columns(columns, self.dim(x, z), self.field)

    def check_associativity(self):
        """Return the first failing (x, y, z, w, i, j, k) or None."""
        objects = self.objects
        for x, y, z, w in product(objects, repeat=4):
            for i in range(self.dim(x, y)):
                u = self.basis_vector(x, y, i)
                for j in range(self.dim(y, z)):
                    v = self.basis_vector(y, z, j)
                    uv = self.compose(u, v, x, y, z)
                    for k in range(self.dim(z, w)):
                        t = self.basis_vector(z, w, k)
                        if self.compose(uv, t, x, z, w) != self.compose(u, self.compose(v, t, y, z, w), x, y, w):
                            return x, y, z, w, i, j, k
        return None

    def check_units(self):
        for x, y in product(self.objects, repeat=2):
            for i in range(self.dim(x, y)):
                u = self.basis_vector(x, y, i)
                if self.compose(self.identity_vector(x), u, x, x, y) != u:
                    return x, y, i
                if self.compose(u, self.identity_vector(y), x, y, y) != u:
                    return x, y, i
        return None

    def check_relations(self):
        """Return the relations that do not vanish."""
        return [relation for relation in self.relations
                if any(c != self.field.zero for c in self.evaluate_relation(relation))]

    def opposite(self):
        if self._opposite is None:
            quiver = Quiver(self.objects, [Arrow(a.name, a.target, a.source) for a in self.arrows])
            basis = {(y, x): [tuple(reversed(word)) for word in words] for (x, y), words in self.basis.items()}
            comp = {}
            for (x, y, z), table in self.comp.items():
                comp[(z, y, x)] = [[table[i][j] for i in range(len(table))] for j in range(self.dim(y, z))]
            name = None if self.name is None else "{}^op".format(self.name)
            opposite = BoundQuiverCategory(quiver, [r.reversed() for r in self.relations], self.field,
                                           self.length_cutoff, basis, comp, name=name,
                                           arrow_vectors=self.arrow_vectors)
            opposite._opposite = self
            self._opposite = opposite
        return self._opposite

    def __eq__(self, other):
        if not isinstance(other, BoundQuiverCategory):
            return False
        return (self.quiver, self.relations, self.field, self.basis, self.comp) == \
            (other.quiver, other.relations, other.field, other.basis, other.comp)

    def __hash__(self):
        return hash((self.quiver, self.relations, self.field))

    def __repr__(self):
        return "BoundQuiverCategory({}, objects={}, total_dim={})".format(
            self.name, list(self.objects), self.total_dim())


def _word_key(word):
    return len(word), word


def _reduce_pair(paths, rows_by_pair, field, pair):
    """Row-reduce the relation rows for one object pair.

    Columns are ordered by decreasing (length, word) so that pivots eliminate
    the longest paths first and the surviving paths are the least ones.
    """
    columns = sorted(paths, key=_word_key, reverse=True)
    position = {word: j for j, word in enumerate(columns)}
    rows = []
    for relation_vector in rows_by_pair.get(pair, []):
        row = [field.zero] * len(columns)
        for word, coefficient in relation_vector.items():
            row[position[word]] += coefficient
        rows.append(row)
    if rows:
        reduced, pivots = rref(from_rows(rows, field, cols=len(columns)))
    else:
        reduced, pivots = [], ()
    return columns, reduced, pivots


def build_category(quiver, relations, field, length_cutoff, name=None):
    """Hom spaces of kQ/I by spanning-set reduction over increasing path length."""
    if length_cutoff < 1:
        raise ValueError("length_cutoff must be at least 1, got {}".format(length_cutoff))
    relations = [r if isinstance(r, Relation) else Relation(r, field) for r in relations]
    relation_ends = [relation.endpoints(quiver) for relation in relations]

    for length in range(1, length_cutoff + 1):
        paths = quiver.paths_up_to(length)
        rows_by_pair = {}
        for relation, (s, t) in zip(relations, relation_ends):
            if max(len(path) for _, path in relation.terms) > length:
                continue
            for x in quiver.objects:
                for w in paths[(x, s)]:
                    for y in quiver.objects:
                        for u in paths[(t, y)]:
                            if any(len(w) + len(path) + len(u) > length for _, path in relation.terms):
                                continue
                            row = {}
                            for coefficient, path in relation.terms:
                                word = w + path + u
                                row[word] = row.get(word, field.zero) + coefficient
                            rows_by_pair.setdefault((x, y), []).append(row)

        reductions = {}
        witness = None
        for pair, pair_paths in paths.items():
            columns, reduced, pivots = _reduce_pair(pair_paths, rows_by_pair, field, pair)
            reductions[pair] = (columns, reduced, pivots)
            pivot_set = set(pivots)
            for j, word in enumerate(columns):
                if j not in pivot_set and len(word) == length:
                    witness = witness or (pair, word)
        logger.debug("  Length %d: %d relation rows", length, sum(len(r) for r in rows_by_pair.values()))
        if witness is None:
            logger.info("  Category %s stabilised at path length %d", name or "", length)
            return _assemble(quiver, relations, field, length_cutoff, reductions, name)
    raise PossiblyInfiniteDimensionalError(witness[0], witness[1], length_cutoff)


def _assemble(quiver, relations, field, length_cutoff, reductions, name):
    basis = {}
    table = {}
    for pair, (columns, reduced, pivots) in reductions.items():
        pivot_set = set(pivots)
        free = [j for j in range(len(columns)) if j not in pivot_set]
        words = sorted((columns[j] for j in free), key=_word_key)
        basis[pair] = words
        slot = {columns[j]: words.index(columns[j]) for j in free}
        for word in words:
            vector = [field.zero] * len(words)
            vector[slot[word]] = field.one
            table[(pair, word)] = vector
        for i, p in enumerate(pivots):
            vector = [field.zero] * len(words)
            for j in free:
                if reduced[i][j] != field.zero:
                    vector[slot[columns[j]]] = -reduced[i][j]
            table[(pair, columns[p])] = vector

    def append_arrow(vector, x, w, arrow):
        result = [field.zero] * len(basis[(x, arrow.target)])
        for k, a in enumerate(vector):
            if a == field.zero:
                continue
            reduced_word = table[((x, arrow.target), basis[(x, w)][k] + (arrow.name,))]
            for m, c in enumerate(reduced_word):
                if c != field.zero:
                    result[m] += a * c
        return result

    comp = {}
    objects = quiver.objects
    for x, y, z in product(objects, repeat=3):
        rows = []
        for i in range(len(basis[(x, y)])):
            row = []
            for word in basis[(y, z)]:
                vector = [field.zero] * len(basis[(x, y)])
                vector[i] = field.one
                current = y
                for arrow_name in word:
                    arrow = quiver.arrow(arrow_name)
                    vector = append_arrow(vector, x, current, arrow)
                    current = arrow.target
                row.append(vector)
            rows.append(row)
        comp[(x, y, z)] = rows
    arrow_vectors = {a.name: table[((a.source, a.target), (a.name,))] for a in quiver.arrows}
    category = BoundQuiverCategory(quiver, relations, field, length_cutoff, basis, comp, name=name,
                                   arrow_vectors=arrow_vectors)
    logger.info("  Num objects = %d, total dimension = %d", len(objects), category.total_dim())
    return category


def point_category(field):
    quiver = Quiver(["*"], [])
    return BoundQuiverCategory(quiver, [], field, 1, {("*", "*"): [()]},
                               {("*", "*", "*"): [[[field.one]]]}, name="k")


def tensor_object(c, d):
    return "{}{}{}".format(c, TENSOR_SEPARATOR, d)


def tensor_category(first, second, name=None):
    """The tensor product over k, with objects and arrows named "c|d", "a|d" and "c|b"."""
    if first.field != second.field:
        raise FieldMismatchError("Cannot tensor categories over {} and {}".format(first.field, second.field))
    for category in (first, second):
        for label in list(category.objects) + [arrow.name for arrow in category.arrows]:
            if TENSOR_SEPARATOR in label:
                raise CategoryValidationError("Id {!r} contains the reserved separator {!r}".format(
                    label, TENSOR_SEPARATOR))
    field = first.field
    objects = [tensor_object(c, d) for c in first.objects for d in second.objects]
    arrows = [Arrow(tensor_object(a.name, d), tensor_object(a.source, d), tensor_object(a.target, d))
              for a in first.arrows for d in second.objects]
    arrows += [Arrow(tensor_object(c, b.name), tensor_object(c, b.source), tensor_object(c, b.target))
               for c in first.objects for b in second.arrows]
    quiver = Quiver(objects, arrows)

    def first_word(word, d):
        return tuple(tensor_object(name, d) for name in word)

    def second_word(c, word):
        return tuple(tensor_object(c, name) for name in word)

    relations = []
    for relation in first.relations:
        for d in second.objects:
            relations.append(Relation([(k, first_word(path, d)) for k, path in relation.terms], field))
    for c in first.objects:
        for relation in second.relations:
            relations.append(Relation([(k, second_word(c, path)) for k, path in relation.terms], field))
    for a in first.arrows:
        for b in second.arrows:
            relations.append(Relation([
                (field.one, (tensor_object(a.name, b.source), tensor_object(a.target, b.name))),
                (-field.one, (tensor_object(a.source, b.name), tensor_object(a.name, b.target))),
            ], field))

    basis = {}
    for c, c2 in product(first.objects, repeat=2):
        for d, d2 in product(second.objects, repeat=2):
            basis[(tensor_object(c, d), tensor_object(c2, d2))] = [
                first_word(u, d) + second_word(c2, v)
                for u in first.basis[(c, c2)] for v in second.basis[(d, d2)]]

    comp = {}
    for c, c2, c3 in product(first.objects, repeat=3):
        table1 = first.comp[(c, c2, c3)]
        for d, d2, d3 in product(second.objects, repeat=3):
            table2 = second.comp[(d, d2, d3)]
            n2 = second.dim(d2, d3)
            rows = []
            for i1 in range(first.dim(c, c2)):
                for i2 in range(second.dim(d, d2)):
                    row = []
                    for j1 in range(first.dim(c2, c3)):
                        for j2 in range(n2):
                            v1, v2 = table1[i1][j1], table2[i2][j2]
                            row.append([a * b for a in v1 for b in v2])
                    rows.append(row)
            comp[(tensor_object(c, d), tensor_object(c2, d2), tensor_object(c3, d3))] = rows
    arrow_vectors = {}
    for a in first.arrows:
        for d in second.objects:
            arrow_vectors[tensor_object(a.name, d)] = [
                u * v for u in first.arrow_vectors[a.name] for v in second.identity_vector(d)]
    for c in first.objects:
        for b in second.arrows:
            arrow_vectors[tensor_object(c, b.name)] = [
                u * v for u in first.identity_vector(c) for v in second.arrow_vectors[b.name]]
    if name is None and first.name and second.name:
        name = "{}(x){}".format(first.name, second.name)
    category = BoundQuiverCategory(quiver, relations, field, first.length_cutoff + second.length_cutoff,
                                   basis, comp, name=name, arrow_vectors=arrow_vectors)
    logger.info("  Tensor category %s: num objects = %d, total dimension = %d",
                name or "", len(objects), category.total_dim())
    return category


class BaseChange:
    """A category C together with a base algebra; functors C -> base-mod live on the total category.

    With the point category as base the total category is C itself and every id is unchanged.
    """

    def __init__(self, category, base=None, total=None):
        self.category = category
        self.base = base if base is not None else point_category(category.field)
        self.trivial = base is None
        if total is not None:
            self.total = total
        elif self.trivial:
            self.total = category
        else:
            self.total = tensor_category(category, self.base)

    @property
    def field(self):
        return self.category.field

    def obj(self, c, b):
        return c if self.trivial else tensor_object(c, b)

    def c_arrow(self, a, b):
        return a if self.trivial else tensor_object(a, b)

    def b_arrow(self, c, beta):
        if self.trivial:
            raise KeyError("The point category has no arrows")
        return tensor_object(c, beta)

    def split(self, total_object):
        if self.trivial:
            return total_object, "*"
        c, b = total_object.split(TENSOR_SEPARATOR)
        return c, b

    def restrict(self, F, b):
        """The C-module F(-, b)."""
        from .cmod import Representation
        dims = {c: F.dims[self.obj(c, b)] for c in self.category.objects}
        maps = {a.name: F.maps[self.c_arrow(a.name, b)] for a in self.category.arrows}
        return Representation(self.category, dims, maps, check=False)

    def component(self, F, c):
        """The base module F(c, -)."""
        from .cmod import Representation
        dims = {b: F.dims[self.obj(c, b)] for b in self.base.objects}
        maps = {beta.name: F.maps[self.b_arrow(c, beta.name)] for beta in self.base.arrows}
        return Representation(self.base, dims, maps, check=False)

    def assemble(self, dims, c_maps, b_maps, check=False):
        """Total module from dims[(c, b)], c_maps[(a, b)] and b_maps[(c, beta)]."""
        from .cmod import Representation
        total_dims = {self.obj(c, b): dims[(c, b)] for c in self.category.objects for b in self.base.objects}
        maps = {self.c_arrow(a, b): matrix for (a, b), matrix in c_maps.items()}
        maps.update({self.b_arrow(c, beta): matrix for (c, beta), matrix in b_maps.items()})
        return Representation(self.total, total_dims, maps, check=check)

    def element_matrix(self, F, g, x, y, b):
        """Matrix of F(g): F(x, b) -> F(y, b) for g in C(x, y)."""
        source, target = self.obj(x, b), self.obj(y, b)
        result = zeros(F.dims[target], F.dims[source], self.field)
        for i, coefficient in enumerate(g):
            if coefficient == self.field.zero:
                continue
            matrix = identity(F.dims[source], self.field)
            for name in self.category.basis[(x, y)][i]:
                matrix = multiply(F.maps[self.c_arrow(name, b)], matrix)
            result = add(result, scale(matrix, coefficient))
        return result

    def opposite(self):
        if self.trivial:
            return BaseChange(self.category.opposite())
        return BaseChange(self.category.opposite(), self.base.opposite(), total=self.total.opposite())

    def swap(self):
        """The same total algebra with the roles of C and the base exchanged."""
        if self.trivial:
            raise ValueError("Cannot swap a trivial base change")
        return BaseChange(self.base, self.category)

    def swap_label(self, label):
        left, right = label.split(TENSOR_SEPARATOR)
        return tensor_object(right, left)

    def __repr__(self):
        return "BaseChange({}, base={})".format(self.category.name, self.base.name)
