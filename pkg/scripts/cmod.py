"""
Left and right modules over a bound quiver category.

A left module F assigns a vector space F(x) to every object and a matrix
F(a): F(x) -> F(y) to every arrow a: x -> y. A right module is stored as a left
module over the opposite category, so its matrix for a: x -> y goes M(y) -> M(x).
Functors C -> base-mod are left modules over the total category of a BaseChange;
tensor products, Hom, Tor and Ext over C are computed for every base object b
and carry the residual action of the base arrows.
"""

import logging
from dataclasses import dataclass

from .category import BaseChange
from .linalg import (FieldMismatchError, add, block_matrix, cokernel_projection, cokernel_section, columns, direct_sum,
                     equal, from_columns, hstack, identity, image as column_space, is_zero, kernel as null_space,
                     kronecker_product, multiply, rank, scale, select_rows, subtract, transpose, zeros)

logger = logging.getLogger(__name__)


class ModuleValidationError(ValueError):
    pass


class InconclusiveAtCutoffError(Exception):

    def __init__(self, cutoff, degree, what="the requested value"):
        self.cutoff = cutoff
        self.degree = degree
        super().__init__("Degree {} of {} is not determined by a resolution truncated at cutoff {}".format(
            degree, what, cutoff))


@dataclass(frozen=True)
class AtLeast:
    """A lower bound reported when a resolution did not finish within the cutoff."""
    bound: int

    def __str__(self):
        return "≥{}".format(self.bound)


def is_finite(value):
    return isinstance(value, int)


class Representation:

    def __init__(self, category, dims, maps=None, check=True):
        self.category = category
        self.field = category.field
        unknown = set(dims) - set(category.objects)
        if unknown:
            raise ModuleValidationError("Unknown objects {}".format(sorted(unknown)))
        self.dims = {x: int(dims.get(x, 0)) for x in category.objects}
        if any(d < 0 for d in self.dims.values()):
            raise ModuleValidationError("Negative dimension in {}".format(self.dims))
        maps = dict(maps or {})
        unknown = set(maps) - set(a.name for a in category.arrows)
        if unknown:
            raise ModuleValidationError("Unknown arrows {}".format(sorted(unknown)))
        self.maps = {}
        for arrow in category.arrows:
            shape = (self.dims[arrow.target], self.dims[arrow.source])
            matrix = maps.get(arrow.name)
            if matrix is None:
                matrix = zeros(shape[0], shape[1], self.field)
            elif matrix.shape != shape:
                raise ModuleValidationError("Matrix for arrow {} has shape {}, expected {}".format(
                    arrow.name, matrix.shape, shape))
            elif matrix.domain != self.field.domain:
                raise FieldMismatchError("Matrix for arrow {} is over {}, expected {}".format(
                    arrow.name, matrix.domain, self.field.domain))
            self.maps[arrow.name] = matrix
        self._paths = {}
        if check:
            failing = self.failing_relations()
            if failing:
                raise ModuleValidationError("Relation {} does not vanish on the representation".format(failing[0]))

    def path_matrix(self, path, source):
        key = (path, source)
        if key not in self._paths:
            matrix = identity(self.dims[source], self.field)
            for name in path:
                matrix = multiply(self.maps[name], matrix)
            self._paths[key] = matrix
        return self._paths[key]

    def element_matrix(self, g, x, y):
        """Matrix of F(g): F(x) -> F(y) for g in C(x, y)."""
        result = zeros(self.dims[y], self.dims[x], self.field)
        for i, coefficient in enumerate(g):
            if coefficient != self.field.zero:
                result = add(result, scale(self.path_matrix(self.category.basis[(x, y)][i], x), coefficient))
        return result

    def failing_relations(self):
        failing = []
        for relation in self.category.relations:
            x, y = relation.endpoints(self.category.quiver)
            total = zeros(self.dims[y], self.dims[x], self.field)
            for coefficient, path in relation.terms:
                total = add(total, scale(self.path_matrix(path, x), coefficient))
            if not is_zero(total):
                failing.append(relation)
        return failing

    def dimension_vector(self):
        return [self.dims[x] for x in self.category.objects]

    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return self.total_dim() == 0

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return False
        if not (self.category is other.category or self.category == other.category):
            return False
        return self.dims == other.dims and all(equal(self.maps[a], other.maps[a]) for a in self.maps)

    def __hash__(self):
        return hash(tuple(self.dimension_vector()))

    def __repr__(self):
        return "Representation({}, dims={})".format(self.category.name, self.dims)


class RightModule:
    """A right module over C, stored as the left module `left` over C^op."""

    def __init__(self, category, dims, maps=None, check=True):
        self.category = category
        self.left = Representation(category.opposite(), dims, maps, check=check)

    @classmethod
    def from_left(cls, left):
        module = cls.__new__(cls)
        module.category = left.category.opposite()
        module.left = left
        return module

    @property
    def field(self):
        return self.left.field

    @property
    def dims(self):
        return self.left.dims

    @property
    def maps(self):
        return self.left.maps

    def dimension_vector(self):
        return self.left.dimension_vector()

    def is_zero(self):
        return self.left.is_zero()

    def __eq__(self, other):
        return isinstance(other, RightModule) and self.left == other.left

    def __hash__(self):
        return hash(self.left)

    def __repr__(self):
        return "RightModule({}, dims={})".format(self.category.name, self.dims)


class ModuleMap:

    def __init__(self, source, target, matrices, check=True):
        if source.category is not target.category and source.category != target.category:
            raise ModuleValidationError("Source and target live over different categories")
        self.source = source
        self.target = target
        self.matrices = {}
        for x in source.category.objects:
            shape = (target.dims[x], source.dims[x])
            matrix = matrices.get(x)
            if matrix is None:
                matrix = zeros(shape[0], shape[1], source.field)
            elif matrix.shape != shape:
                raise ModuleValidationError("Component at {} has shape {}, expected {}".format(x, matrix.shape, shape))
            self.matrices[x] = matrix
        if check:
            failing = self.failing_arrows()
            if failing:
                raise ModuleValidationError("Naturality fails at arrow {}".format(failing[0]))

    @property
    def category(self):
        return self.source.category

    def failing_arrows(self):
        failing = []
        for arrow in self.category.arrows:
            left = multiply(self.target.maps[arrow.name], self.matrices[arrow.source])
            right = multiply(self.matrices[arrow.target], self.source.maps[arrow.name])
            if not equal(left, right):
                failing.append(arrow.name)
        return failing

    def is_zero(self):
        return all(is_zero(m) for m in self.matrices.values())

    def ranks(self):
        return {x: rank(m) for x, m in self.matrices.items()}

    def is_iso(self):
        return all(self.source.dims[x] == self.target.dims[x] == rank(m) for x, m in self.matrices.items())

    def is_injective(self):
        return all(rank(m) == self.source.dims[x] for x, m in self.matrices.items())

    def __eq__(self, other):
        return isinstance(other, ModuleMap) and all(
            equal(self.matrices[x], other.matrices[x]) for x in self.matrices)

    def __hash__(self):
        return hash(tuple(sorted(self.ranks().items())))


def identity_map(M):
    return ModuleMap(M, M, {x: identity(d, M.field) for x, d in M.dims.items()}, check=False)


def zero_map(source, target):
    return ModuleMap(source, target, {}, check=False)


def compose(g, f):
    """g after f."""
    return ModuleMap(f.source, g.target, {x: multiply(g.matrices[x], f.matrices[x]) for x in f.matrices},
                     check=False)


def zero_module(category):
    return Representation(category, {}, check=False)


def simple(category, x, side="left"):
    if x not in category.objects:
        raise ModuleValidationError("Unknown object {!r}".format(x))
    if side == "right":
        return RightModule(category, {x: 1}, check=False)
    return Representation(category, {x: 1}, check=False)


class ProjectiveModule(Representation):
    """The direct sum of the representables C(x_s, -) over the listed summands."""

    def __init__(self, category, summands):
        self.summands = tuple(summands)
        field = category.field
        self.offsets = {}
        dims = {}
        for y in category.objects:
            offsets, total = [], 0
            for x in self.summands:
                offsets.append(total)
                total += category.dim(x, y)
            self.offsets[y] = offsets
            dims[y] = total
        maps = {}
        for arrow in category.arrows:
            vector = category.arrow_vectors[arrow.name]
            blocks = [category.postcomposition_matrix(vector, x, arrow.source, arrow.target) for x in self.summands]
            maps[arrow.name] = direct_sum(blocks, field) if blocks else zeros(
                dims[arrow.target], dims[arrow.source], field)
        super().__init__(category, dims, maps, check=False)

    def generator_position(self, s):
        x = self.summands[s]
        return self.offsets[x][s] + self.category.identity_index[x]

    def block(self, vector, s, y):
        """The component of an element of P(y) in the summand C(x_s, y)."""
        x = self.summands[s]
        start = self.offsets[y][s]
        return list(vector[start:start + self.category.dim(x, y)])


def representable(category, x, side="left"):
    if x not in category.objects:
        raise ModuleValidationError("Unknown object {!r}".format(x))
    if side == "right":
        return RightModule.from_left(ProjectiveModule(category.opposite(), [x]))
    return ProjectiveModule(category, [x])


def regular_module(category):
    return ProjectiveModule(category, list(category.objects))


def map_from_projective(P, M, elements):
    """The map P -> M sending the generator of summand s to elements[s] in M(x_s)."""
    category = P.category
    matrices = {}
    for y in category.objects:
        blocks = []
        for s, x in enumerate(P.summands):
            element = from_columns([elements[s]], M.dims[x], M.field)
            for word in category.basis[(x, y)]:
                blocks.append(multiply(M.path_matrix(word, x), element))
        matrices[y] = hstack(blocks, M.dims[y], M.field) if blocks else zeros(M.dims[y], 0, M.field)
    return ModuleMap(P, M, matrices, check=False)


def projective_blocks(f):
    """Read a map between projective modules as elements g[(t, s)] of C(y_t, x_s)."""
    P, Q = f.source, f.target
    blocks = {}
    for s, x in enumerate(P.summands):
        image = [row[P.generator_position(s)] for row in f.matrices[x].to_list()]
        for t in range(len(Q.summands)):
            blocks[(t, s)] = Q.block(image, t, x)
    return blocks


def map_between_projectives(P, Q, blocks):
    field = P.field
    elements = []
    for s, x in enumerate(P.summands):
        element = []
        for t, y in enumerate(Q.summands):
            element += blocks.get((t, s)) or [field.zero] * P.category.dim(y, x)
        elements.append(element)
    return map_from_projective(P, Q, elements)


def transpose_module(F):
    """The dual D(F) as a left module over the opposite category."""
    return Representation(F.category.opposite(), F.dims, {a: transpose(m) for a, m in F.maps.items()}, check=False)


def transpose_map(f):
    """D(f): D(target) -> D(source)."""
    return ModuleMap(transpose_module(f.target), transpose_module(f.source),
                     {x: transpose(m) for x, m in f.matrices.items()}, check=False)


def dual(M):
    """D = Hom_k(-, k), exchanging left and right modules."""
    if isinstance(M, RightModule):
        return transpose_module(M.left)
    return RightModule.from_left(transpose_module(M))


def direct_sum_modules(modules):
    """Direct sum with its inclusions and projections."""
    category = modules[0].category
    field = category.field
    dims = {x: sum(M.dims[x] for M in modules) for x in category.objects}
    maps = {a.name: direct_sum([M.maps[a.name] for M in modules], field) for a in category.arrows}
    total = Representation(category, dims, maps, check=False)
    inclusions, projections = [], []
    for k, M in enumerate(modules):
        inclusion, projection = {}, {}
        for x in category.objects:
            sizes = [N.dims[x] for N in modules]
            inclusion[x] = block_matrix({(k, 0): identity(M.dims[x], field)}, sizes, [M.dims[x]], field)
            projection[x] = block_matrix({(0, k): identity(M.dims[x], field)}, [M.dims[x]], sizes, field)
        inclusions.append(ModuleMap(M, total, inclusion, check=False))
        projections.append(ModuleMap(total, M, projection, check=False))
    return total, inclusions, projections


def kernel(f):
    """Kernel of f with its inclusion; inclusion.positions[x] are the coordinate rows."""
    M, N = f.source, f.target
    subspaces = {x: null_space(f.matrices[x]) for x in M.category.objects}
    return _submodule(M, subspaces)


def image(f):
    N = f.target
    subspaces = {x: column_space(f.matrices[x]) for x in N.category.objects}
    return _submodule(N, subspaces)


def _submodule(M, subspaces):
    maps = {}
    for arrow in M.category.arrows:
        moved = multiply(M.maps[arrow.name], subspaces[arrow.source].basis)
        maps[arrow.name] = subspaces[arrow.target].coordinates(moved)
    K = Representation(M.category, {x: s.dim for x, s in subspaces.items()}, maps, check=False)
    inclusion = ModuleMap(K, M, {x: s.basis for x, s in subspaces.items()}, check=False)
    inclusion.positions = {x: s.positions for x, s in subspaces.items()}
    return K, inclusion


def cokernel(f):
    """Cokernel of f with its projection; projection.sections[x] is a right inverse at x."""
    N = f.target
    projections, sections = {}, {}
    for x in N.category.objects:
        _, projections[x] = cokernel_projection(f.matrices[x])
        sections[x] = cokernel_section(f.matrices[x])
    maps = {}
    for arrow in N.category.arrows:
        maps[arrow.name] = multiply(projections[arrow.target], N.maps[arrow.name], sections[arrow.source])
    Q = Representation(N.category, {x: p.shape[0] for x, p in projections.items()}, maps, check=False)
    projection = ModuleMap(N, Q, projections, check=False)
    projection.sections = sections
    return Q, projection


def factor_through_kernel(f, inclusion):
    """The map into the kernel whose composite with the inclusion is f."""
    return ModuleMap(f.source, inclusion.source,
                     {x: select_rows(f.matrices[x], inclusion.positions[x]) for x in f.matrices}, check=False)


def homology(d_in, d_out):
    """ker(d_out) / im(d_in) for composable maps with d_out after d_in zero."""
    K, inclusion = kernel(d_out)
    H, _ = cokernel(factor_through_kernel(d_in, inclusion))
    return H


def top_elements(M):
    """Elements of M lifting a basis of M / rad M, ordered by object then section column."""
    elements = []
    for x in M.category.objects:
        incoming = [M.maps[a.name] for a in M.category.quiver.arrows_into(x)]
        radical = hstack(incoming, M.dims[x], M.field) if incoming else zeros(M.dims[x], 0, M.field)
        for column in columns(cokernel_section(radical)):
            elements.append((x, column))
    return elements


def top(M):
    return {x: sum(1 for y, _ in top_elements(M) if y == x) for x in M.category.objects}


def projective_cover(M, padding=None):
    """Minimal projective cover; `padding` adds one extra summand mapped to zero."""
    elements = top_elements(M)
    summands = [x for x, _ in elements]
    vectors = [v for _, v in elements]
    if padding is not None:
        summands.append(padding)
        vectors.append([M.field.zero] * M.dims[padding])
    P = ProjectiveModule(M.category, summands)
    return P, map_from_projective(P, M, vectors)


def is_projective(M):
    return sum(ProjectiveModule(M.category, [x for x, _ in top_elements(M)]).dims.values()) == M.total_dim()


@dataclass
class Resolution:
    """P_n -> ... -> P_0 -> M -> 0 with differentials[n - 1]: P_n -> P_{n-1}.

    tail is the last syzygy with its inclusion into P_n; tail_kind is "zero" when the
    resolution finished, "acyclic" when a stop condition accepted the tail, and
    "truncated" when the cutoff was reached.
    """
    module: Representation
    modules: list
    differentials: list
    augmentation: ModuleMap
    syzygies: list
    tail_inclusion: ModuleMap
    tail_kind: str
    cutoff: int

    @property
    def length(self):
        return len(self.modules) - 1

    @property
    def tail(self):
        return self.tail_inclusion.source

    @property
    def completed(self):
        return self.tail_kind != "truncated"

    def pdim(self):
        if self.tail_kind == "zero":
            return self.length
        if self.tail_kind == "acyclic":
            return AtLeast(self.length + 1)
        return AtLeast(self.cutoff)

    def summands(self):
        return [list(P.summands) for P in self.modules]


def projective_resolution(M, cutoff=16, padding=None, stop=None):
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative, got {}".format(cutoff))
    if isinstance(M, RightModule):
        M = M.left
    modules, differentials, syzygies = [], [], []
    augmentation, inclusion, current, current_inclusion = None, None, M, None
    for n in range(cutoff + 1):
        cover, epi = projective_cover(current, padding=padding if n == 0 else None)
        modules.append(cover)
        if n == 0:
            augmentation = epi
        else:
            differentials.append(compose(current_inclusion, epi))
        K, inclusion = kernel(epi)
        syzygies.append(K)
        logger.debug("  Stage %d: %d summands, syzygy dims %s", n, len(cover.summands), K.dimension_vector())
        if K.is_zero():
            return Resolution(M, modules, differentials, augmentation, syzygies, inclusion, "zero", cutoff)
        if stop is not None and stop(K):
            return Resolution(M, modules, differentials, augmentation, syzygies, inclusion, "acyclic", cutoff)
        current, current_inclusion = K, inclusion
    return Resolution(M, modules, differentials, augmentation, syzygies, inclusion, "truncated", cutoff)


def pdim(M, cutoff=16):
    return projective_resolution(M, cutoff).pdim()


class DerivedModules:
    """Degree-indexed values computed lazily from a resolution.

    Degrees up to `computable_through` are computed; above it they vanish when
    `vanishes_above` is set and are inconclusive otherwise.
    """

    def __init__(self, compute, computable_through, vanishes_above, cutoff, zero, what="derived module"):
        self._compute = compute
        self._values = {}
        self.computable_through = computable_through
        self.vanishes_above = vanishes_above
        self.cutoff = cutoff
        self.zero = zero
        self.what = what

    def module(self, i):
        if i < 0:
            return self.zero
        if i <= self.computable_through:
            if i not in self._values:
                self._values[i] = self._compute(i)
            return self._values[i]
        if self.vanishes_above is not None and i > self.vanishes_above:
            return self.zero
        raise InconclusiveAtCutoffError(self.cutoff, i, self.what)

    def dims(self, i):
        return dict(self.module(i).dims)


def _sum_of_components(change, F, summands):
    """The base module (+)_s F(x_s, -)."""
    base, field = change.base, change.field
    dims = {b: sum(F.dims[change.obj(x, b)] for x in summands) for b in base.objects}
    maps = {}
    for beta in base.arrows:
        blocks = [F.maps[change.b_arrow(x, beta.name)] for x in summands]
        maps[beta.name] = direct_sum(blocks, field) if blocks else zeros(0, 0, field)
    return Representation(base, dims, maps, check=False)


def _block_map(change, F, source_summands, target_summands, blocks, source, target):
    """Base map (+)_s F(x_s) -> (+)_t F(y_t) with block (t, s) the action of blocks[(t, s)] in C(x_s, y_t)."""
    field = change.field
    matrices = {}
    for b in change.base.objects:
        row_sizes = [F.dims[change.obj(y, b)] for y in target_summands]
        col_sizes = [F.dims[change.obj(x, b)] for x in source_summands]
        parts = {}
        for (t, s), g in blocks.items():
            if any(c != field.zero for c in g):
                parts[(t, s)] = change.element_matrix(F, g, source_summands[s], target_summands[t], b)
        matrices[b] = block_matrix(parts, row_sizes, col_sizes, field)
    return ModuleMap(source, target, matrices, check=False)


def _tor_complex(resolution, F, change):
    """Chain complex P_n (x)_C F as base modules and maps d[n]: level n -> level n - 1."""
    levels = [_sum_of_components(change, F, P.summands) for P in resolution.modules]
    maps = {0: zero_map(levels[0], zero_module(change.base))}
    for n, d in enumerate(resolution.differentials, start=1):
        P, Q = d.source, d.target
        # g in C^op(y_t, x_s) is the element of C(x_s, y_t) with the same coordinates
        maps[n] = _block_map(change, F, P.summands, Q.summands, projective_blocks(d), levels[n], levels[n - 1])
    return levels, maps


def tor_modules(M, F, cutoff=16, change=None, padding=None):
    """Tor^C_*(M, F(-, b)) as base modules, from a projective resolution of the right module M."""
    change = change or BaseChange(F.category)
    resolution = projective_resolution(M, cutoff, padding=padding)
    levels, maps = _tor_complex(resolution, F, change)
    zero = zero_module(change.base)

    def compute(i):
        if i == resolution.length:
            incoming = zero_map(zero, levels[i])
        else:
            incoming = maps[i + 1]
        return homology(incoming, maps[i])

    if resolution.tail_kind == "zero":
        return DerivedModules(compute, resolution.length, resolution.length, cutoff, zero, "Tor")
    return DerivedModules(compute, resolution.length - 1, None, cutoff, zero, "Tor")


def tor(M, F, i, cutoff=16, change=None, padding=None):
    return tor_modules(M, F, cutoff, change, padding).module(i)


def _ext_complex(resolution, G, change):
    """Cochain complex Hom_C(P_n, G) and maps delta[n]: level n - 1 -> level n."""
    levels = [_sum_of_components(change, G, P.summands) for P in resolution.modules]
    maps = {}
    for n, d in enumerate(resolution.differentials, start=1):
        P, Q = d.source, d.target
        transposed = {(s, t): g for (t, s), g in projective_blocks(d).items()}
        maps[n] = _block_map(change, G, Q.summands, P.summands, transposed, levels[n - 1], levels[n])
    return levels, maps


def ext_modules(M, G, cutoff=16, change=None):
    """Ext^*_C(M, G(-, b)) as base modules, from a projective resolution of the left module M."""
    change = change or BaseChange(G.category)
    resolution = projective_resolution(M, cutoff)
    levels, maps = _ext_complex(resolution, G, change)
    zero = zero_module(change.base)

    def compute(i):
        incoming = maps[i] if i > 0 else zero_map(zero, levels[0])
        outgoing = maps[i + 1] if i + 1 in maps else zero_map(levels[i], zero)
        return homology(incoming, outgoing)

    if resolution.tail_kind == "zero":
        return DerivedModules(compute, resolution.length, resolution.length, cutoff, zero, "Ext")
    return DerivedModules(compute, resolution.length - 1, None, cutoff, zero, "Ext")


def ext(M, G, i, cutoff=16, change=None):
    return ext_modules(M, G, cutoff, change).module(i)


class TensorPresentation:
    """M (x)_C F(-, b) as the cokernel of the arrow relations m.a (x) f - m (x) a.f.

    Slots are (+)_x M(x) (x) F(x, b) with the M index major.
    """

    def __init__(self, M, F, change=None):
        self.M = M
        self.F = F
        self.change = change = change or BaseChange(F.category)
        C, field = change.category, change.field
        if M.category is not C and M.category != C:
            raise ModuleValidationError("Right module and functor live over different categories")
        self.slot_sizes, self.projections, self.sections, dims = {}, {}, {}, {}
        for b in change.base.objects:
            sizes = [M.dims[x] * F.dims[change.obj(x, b)] for x in C.objects]
            position = {x: k for k, x in enumerate(C.objects)}
            relation_sizes, blocks = [], {}
            for k, arrow in enumerate(C.arrows):
                x, y = arrow.source, arrow.target
                F_a = F.maps[change.c_arrow(arrow.name, b)]
                relation_sizes.append(M.dims[y] * F.dims[change.obj(x, b)])
                acted_on_m = kronecker_product(M.maps[arrow.name], identity(F.dims[change.obj(x, b)], field))
                acted_on_f = kronecker_product(identity(M.dims[y], field), F_a)
                if x == y:
                    blocks[(position[x], k)] = subtract(acted_on_m, acted_on_f)
                else:
                    blocks[(position[x], k)] = acted_on_m
                    blocks[(position[y], k)] = scale(acted_on_f, -field.one)
            relations = block_matrix(blocks, sizes, relation_sizes, field)
            dims[b], self.projections[b] = cokernel_projection(relations)
            self.sections[b] = cokernel_section(relations)
            self.slot_sizes[b] = sizes
        maps = {}
        for beta in change.base.arrows:
            acting = direct_sum([kronecker_product(identity(M.dims[x], field),
                                                   F.maps[change.b_arrow(x, beta.name)]) for x in C.objects], field)
            maps[beta.name] = multiply(self.projections[beta.target], acting, self.sections[beta.source])
        self.module = Representation(change.base, dims, maps, check=False)

    def slot_offset(self, x, b):
        k = list(self.change.category.objects).index(x)
        return sum(self.slot_sizes[b][:k])

    def induced(self, slot_maps, target, b):
        """pi' (+)_x slot_maps[x] s at base object b."""
        acting = direct_sum([slot_maps[x] for x in self.change.category.objects], self.change.field)
        return multiply(target.projections[b], acting, self.sections[b])


def tensor_over_C(M, F, change=None):
    return TensorPresentation(M, F, change).module


def tensor_map(M, f, change=None, source=None, target=None):
    """M (x)_C f as a map of base modules."""
    change = change or BaseChange(f.category)
    source = source or TensorPresentation(M, f.source, change)
    target = target or TensorPresentation(M, f.target, change)
    field = change.field
    matrices = {}
    for b in change.base.objects:
        slot_maps = {x: kronecker_product(identity(M.dims[x], field), f.matrices[change.obj(x, b)])
                     for x in change.category.objects}
        matrices[b] = source.induced(slot_maps, target, b)
    return ModuleMap(source.module, target.module, matrices, check=False)


class HomPresentation:
    """Hom_C(M, G(-, b)) as the kernel of the naturality equations.

    A natural map phi is stored as the concatenation over x of phi_x flattened row-major.
    """

    def __init__(self, M, G, change=None):
        self.M = M
        self.G = G
        self.change = change = change or BaseChange(G.category)
        C, field = change.category, change.field
        if M.category is not C and M.category != C:
            raise ModuleValidationError("Module and functor live over different categories")
        self.slot_sizes, self.subspaces, dims = {}, {}, {}
        position = {x: k for k, x in enumerate(C.objects)}
        for b in change.base.objects:
            sizes = [G.dims[change.obj(x, b)] * M.dims[x] for x in C.objects]
            equation_sizes, blocks = [], {}
            for k, arrow in enumerate(C.arrows):
                x, y = arrow.source, arrow.target
                G_a = G.maps[change.c_arrow(arrow.name, b)]
                equation_sizes.append(G.dims[change.obj(y, b)] * M.dims[x])
                after = kronecker_product(G_a, identity(M.dims[x], field))
                before = kronecker_product(identity(G.dims[change.obj(y, b)], field), transpose(M.maps[arrow.name]))
                if x == y:
                    blocks[(k, position[x])] = subtract(after, before)
                else:
                    blocks[(k, position[x])] = after
                    blocks[(k, position[y])] = scale(before, -field.one)
            equations = block_matrix(blocks, equation_sizes, sizes, field)
            self.subspaces[b] = null_space(equations)
            self.slot_sizes[b] = sizes
            dims[b] = self.subspaces[b].dim
        maps = {}
        for beta in change.base.arrows:
            acting = direct_sum([kronecker_product(G.maps[change.b_arrow(x, beta.name)], identity(M.dims[x], field))
                                 for x in C.objects], field)
            maps[beta.name] = self.coordinates(multiply(acting, self.subspaces[beta.source].basis), beta.target)
        self.module = Representation(change.base, dims, maps, check=False)

    def coordinates(self, vectors, b):
        return self.subspaces[b].coordinates(vectors)

    def slot_offset(self, x, b):
        k = list(self.change.category.objects).index(x)
        return sum(self.slot_sizes[b][:k])

    def components(self, vector, b):
        """Split a flattened natural map into its matrices phi_x."""
        result = {}
        for x in self.change.category.objects:
            rows, cols = self.G.dims[self.change.obj(x, b)], self.M.dims[x]
            start = self.slot_offset(x, b)
            flat = vector[start:start + rows * cols]
            result[x] = from_columns([[flat[r * cols + c] for r in range(rows)] for c in range(cols)], rows,
                                     self.change.field) if cols else zeros(rows, 0, self.change.field)
        return result

    def induced(self, slot_maps, target, b):
        acting = direct_sum([slot_maps[x] for x in self.change.category.objects], self.change.field)
        return target.coordinates(multiply(acting, self.subspaces[b].basis), b)


def hom_over_C(M, G, change=None):
    return HomPresentation(M, G, change).module


def hom_map(M, g, change=None, source=None, target=None):
    """Hom_C(M, g) as a map of base modules."""
    change = change or BaseChange(g.category)
    source = source or HomPresentation(M, g.source, change)
    target = target or HomPresentation(M, g.target, change)
    field = change.field
    matrices = {}
    for b in change.base.objects:
        slot_maps = {x: kronecker_product(g.matrices[change.obj(x, b)], identity(M.dims[x], field))
                     for x in change.category.objects}
        matrices[b] = source.induced(slot_maps, target, b)
    return ModuleMap(source.module, target.module, matrices, check=False)


def hom_basis(F, G):
    """A basis of the natural maps F -> G."""
    presentation = HomPresentation(F, G, BaseChange(F.category))
    subspace = presentation.subspaces["*"]
    return [ModuleMap(F, G, presentation.components(vector, "*"), check=False)
            for vector in columns(subspace.basis)]


def hom_complex(window, G, change=None):
    """Apply Hom_C(-, G) to a list of composable maps between projective modules.

    Returns one map Hom_C(Q, G) -> Hom_C(P, G) per map P -> Q, in window order.
    """
    change = change or BaseChange(G.category)
    result = []
    for d in window:
        P, Q = d.source, d.target
        source = _sum_of_components(change, G, Q.summands)
        target = _sum_of_components(change, G, P.summands)
        transposed = {(s, t): g for (t, s), g in projective_blocks(d).items()}
        result.append(_block_map(change, G, Q.summands, P.summands, transposed, source, target))
    return result
