"""
The adjoint triple i_! -| i^* -| i_* for the inclusion of the objects of C, the
Nakayama functor nu = D(C) (x)_C - and its right adjoint nu^-.

For a functor F: C -> base-mod (a module over the total category of a BaseChange):

    i_!(B)(x)  = (+)_c C(c, x) (x) B^c
    i_*(B)(x)  = (+)_c D(C(x, c)) (x) B^c
    nu(F)(c)   = D(C(c, -)) (x)_C F
    nu^-(G)(c) = Hom_C(D(C(-, c)), G)

Only the C-factor is dualized; the base action is carried along.
"""

import logging
from dataclasses import dataclass, field as dataclass_field

from .category import BaseChange
from .cmod import (AtLeast, DerivedModules, HomPresentation, ModuleMap, TensorPresentation,
                   dual, ext_modules, homology, is_finite, is_projective, pdim, projective_resolution,
                   representable, tor_modules, transpose_map, transpose_module, zero_map, zero_module)
from .linalg import (block_matrix, columns, direct_sum, from_columns, from_dict, hstack, identity, kronecker_product,
                     multiply, transpose, vstack, zeros)

logger = logging.getLogger(__name__)


class GorensteinInconsistencyError(ArithmeticError):
    pass


@dataclass
class GorensteinDimension:
    value: object
    status: str
    s1: object
    s2: object
    per_object: dict = dataclass_field(default_factory=dict)

    @property
    def is_finite(self):
        return self.status == "finite"


def _sup(values):
    if all(is_finite(v) for v in values):
        return max(values, default=0)
    return AtLeast(max(v.bound if isinstance(v, AtLeast) else v for v in values))


class AdjointTriple:

    def __init__(self, change):
        self.change = change
        self.category = change.category
        self.field = change.field
        self._right_coefficients = {}
        self._left_coefficients = {}
        self._gorenstein_dimension = {}

    # coefficient modules

    def right_coefficient(self, c):
        """D(C(c, -)) as a right C-module."""
        if c not in self._right_coefficients:
            self._right_coefficients[c] = dual(representable(self.category, c, "left"))
        return self._right_coefficients[c]

    def left_coefficient(self, c):
        """D(C(-, c)) as a left C-module."""
        if c not in self._left_coefficients:
            self._left_coefficients[c] = dual(representable(self.category, c, "right"))
        return self._left_coefficients[c]

    # i_! -| i^* -| i_*

    def i_star(self, F):
        return {c: self.change.component(F, c) for c in self.category.objects}

    def i_star_map(self, f):
        result = {}
        for c in self.category.objects:
            source, target = self.change.component(f.source, c), self.change.component(f.target, c)
            result[c] = ModuleMap(source, target, {b: f.matrices[self.change.obj(c, b)]
                                                   for b in self.change.base.objects}, check=False)
        return result

    def _induce(self, parts, hom_dim, arrow_block):
        C, base, change, field = self.category, self.change.base, self.change, self.field
        dims, c_maps, b_maps = {}, {}, {}
        for x in C.objects:
            for b in base.objects:
                dims[(x, b)] = sum(hom_dim(c, x) * parts[c].dims[b] for c in C.objects)
        for arrow in C.arrows:
            for b in base.objects:
                blocks = [kronecker_product(arrow_block(c, arrow), identity(parts[c].dims[b], field))
                          for c in C.objects]
                c_maps[(arrow.name, b)] = direct_sum(blocks, field)
        for x in C.objects:
            for beta in base.arrows:
                blocks = [kronecker_product(identity(hom_dim(c, x), field), parts[c].maps[beta.name])
                          for c in C.objects]
                b_maps[(x, beta.name)] = direct_sum(blocks, field)
        return change.assemble(dims, c_maps, b_maps)

    def i_shriek(self, parts):
        """(+)_c C(c, -) (x) B^c."""
        C = self.category
        return self._induce(parts, lambda c, x: C.dim(c, x), lambda c, arrow: C.postcomposition_matrix(
            C.arrow_vectors[arrow.name], c, arrow.source, arrow.target))

    def i_lower_star(self, parts):
        """(+)_c D(C(-, c)) (x) B^c."""
        C = self.category
        return self._induce(parts, lambda c, x: C.dim(x, c), lambda c, arrow: transpose(C.precomposition_matrix(
            C.arrow_vectors[arrow.name], arrow.source, arrow.target, c)))

    def i_shriek_map(self, maps, source=None, target=None):
        C, field = self.category, self.field
        source = source or self.i_shriek({c: g.source for c, g in maps.items()})
        target = target or self.i_shriek({c: g.target for c, g in maps.items()})
        matrices = {}
        for x in C.objects:
            for b in self.change.base.objects:
                matrices[self.change.obj(x, b)] = direct_sum(
                    [kronecker_product(identity(C.dim(c, x), field), maps[c].matrices[b]) for c in C.objects], field)
        return ModuleMap(source, target, matrices, check=False)

    def shriek_unit(self, parts):
        """eta: B -> i^* i_! B."""
        C, field = self.category, self.field
        induced = self.i_star(self.i_shriek(parts))
        result = {}
        for c in C.objects:
            matrices = {}
            for b in self.change.base.objects:
                sizes = [C.dim(c2, c) * parts[c2].dims[b] for c2 in C.objects]
                generator = from_columns([C.identity_vector(c)], C.dim(c, c), field)
                block = kronecker_product(generator, identity(parts[c].dims[b], field))
                matrices[b] = block_matrix({(C.objects.index(c), 0): block}, sizes, [parts[c].dims[b]], field)
            result[c] = ModuleMap(parts[c], induced[c], matrices, check=False)
        return result

    def shriek_counit(self, F, source=None):
        """epsilon: i_! i^* F -> F, the action map."""
        C, change = self.category, self.change
        source = source or self.i_shriek(self.i_star(F))
        matrices = {}
        for x in C.objects:
            for b in change.base.objects:
                blocks = [change.element_matrix(F, C.basis_vector(c, x, i), c, x, b)
                          for c in C.objects for i in range(C.dim(c, x))]
                rows = F.dims[change.obj(x, b)]
                matrices[change.obj(x, b)] = hstack(blocks, rows, self.field) if blocks else zeros(rows, 0, self.field)
        return ModuleMap(source, F, matrices, check=False)

    def lower_star_unit(self, F, target=None):
        """F -> i_* i^* F."""
        C, change = self.category, self.change
        target = target or self.i_lower_star(self.i_star(F))
        matrices = {}
        for x in C.objects:
            for b in change.base.objects:
                blocks = [change.element_matrix(F, C.basis_vector(x, c, i), x, c, b)
                          for c in C.objects for i in range(C.dim(x, c))]
                cols = F.dims[change.obj(x, b)]
                matrices[change.obj(x, b)] = vstack(blocks, cols, self.field) if blocks else zeros(0, cols, self.field)
        return ModuleMap(F, target, matrices, check=False)

    def lower_star_counit(self, parts):
        """i^* i_* B -> B, evaluation at the identity."""
        C, field = self.category, self.field
        induced = self.i_star(self.i_lower_star(parts))
        result = {}
        for c in C.objects:
            matrices = {}
            for b in self.change.base.objects:
                sizes = [C.dim(c, c2) * parts[c2].dims[b] for c2 in C.objects]
                evaluation = transpose(from_columns([C.identity_vector(c)], C.dim(c, c), field))
                block = kronecker_product(evaluation, identity(parts[c].dims[b], field))
                matrices[b] = block_matrix({(0, C.objects.index(c)): block}, [parts[c].dims[b]], sizes, field)
            result[c] = ModuleMap(induced[c], parts[c], matrices, check=False)
        return result

    # nu and nu^-

    def nu_presentation(self, F):
        return NuPresentation(self, F)

    def nu(self, F):
        return NuPresentation(self, F).module

    def nu_minus_presentation(self, G):
        return NuMinusPresentation(self, G)

    def nu_minus(self, G):
        return NuMinusPresentation(self, G).module

    def nu_map(self, f, source=None, target=None):
        source = source or NuPresentation(self, f.source)
        target = target or NuPresentation(self, f.target)
        C, change, field = self.category, self.change, self.field
        matrices = {}
        for c in C.objects:
            M = self.right_coefficient(c)
            for b in change.base.objects:
                slot_maps = {x: kronecker_product(identity(M.dims[x], field), f.matrices[change.obj(x, b)])
                             for x in C.objects}
                matrices[change.obj(c, b)] = source.parts[c].induced(slot_maps, target.parts[c], b)
        return ModuleMap(source.module, target.module, matrices, check=False)

    def nu_minus_map(self, g, source=None, target=None):
        source = source or NuMinusPresentation(self, g.source)
        target = target or NuMinusPresentation(self, g.target)
        C, change, field = self.category, self.change, self.field
        matrices = {}
        for c in C.objects:
            I = self.left_coefficient(c)
            for b in change.base.objects:
                slot_maps = {x: kronecker_product(g.matrices[change.obj(x, b)], identity(I.dims[x], field))
                             for x in C.objects}
                matrices[change.obj(c, b)] = source.parts[c].induced(slot_maps, target.parts[c], b)
        return ModuleMap(source.module, target.module, matrices, check=False)

    def unit_lambda(self, F, nu_presentation=None, nu_minus_presentation=None):
        """lambda_F: F -> nu^- nu F, with whether it is an isomorphism."""
        C, change, field = self.category, self.change, self.field
        nu_F = nu_presentation or NuPresentation(self, F)
        back = nu_minus_presentation or NuMinusPresentation(self, nu_F.module)
        matrices = {}
        for x in C.objects:
            for b in change.base.objects:
                hom = back.parts[x]
                length = sum(hom.slot_sizes[b])
                size = F.dims[change.obj(x, b)]
                vectors = []
                for j in range(size):
                    vector = [field.zero] * length
                    for y in C.objects:
                        tensor = nu_F.parts[y]
                        projection = tensor.projections[b].to_list()
                        start = tensor.slot_offset(x, b)
                        width = C.dim(y, x)
                        offset = hom.slot_offset(y, b)
                        for r, row in enumerate(projection):
                            for i in range(width):
                                vector[offset + r * width + i] = row[start + i * size + j]
                    vectors.append(vector)
                basis = from_columns(vectors, length, field)
                matrices[change.obj(x, b)] = hom.coordinates(basis, b)
        unit = ModuleMap(F, back.module, matrices, check=False)
        return unit, unit.is_iso()

    def counit_sigma(self, G, nu_minus_presentation=None, nu_presentation=None):
        """sigma_G: nu nu^- G -> G, evaluation of a natural map at xi."""
        C, change, field = self.category, self.change, self.field
        hom = nu_minus_presentation or NuMinusPresentation(self, G)
        there = nu_presentation or NuPresentation(self, hom.module)
        matrices = {}
        for c in C.objects:
            tensor = there.parts[c]
            for b in change.base.objects:
                rows = G.dims[change.obj(c, b)]
                blocks = []
                for x in C.objects:
                    evaluations = [hom.parts[x].components(vector, b)[c].to_list()
                                   for vector in columns(hom.parts[x].subspaces[b].basis)]
                    for i in range(C.dim(c, x)):
                        for psi in evaluations:
                            blocks.append([row[i] for row in psi])
                evaluation = from_columns(blocks, rows, field)
                matrices[change.obj(c, b)] = multiply(evaluation, tensor.sections[b])
        return ModuleMap(there.module, G, matrices, check=False)

    def nu_of_shriek(self, parts, source=None, target=None):
        """The isomorphism nu(i_! B) -> i_* B."""
        C, change, field = self.category, self.change, self.field
        shriek = self.i_shriek(parts)
        source = source or NuPresentation(self, shriek)
        target = target or self.i_lower_star(parts)
        matrices = {}
        for c in C.objects:
            tensor = source.parts[c]
            for b in change.base.objects:
                sizes = {c2: parts[c2].dims[b] for c2 in C.objects}
                target_offsets, total = {}, 0
                for c2 in C.objects:
                    target_offsets[c2] = total
                    total += C.dim(c, c2) * sizes[c2]
                length = sum(tensor.slot_sizes[b])
                entries = {}
                for y in C.objects:
                    slot = tensor.slot_offset(y, b)
                    width = shriek.dims[change.obj(y, b)]
                    inner = 0
                    for c2 in C.objects:
                        table = C.comp[(c, c2, y)]
                        for i in range(C.dim(c2, y)):
                            for r in range(sizes[c2]):
                                for m in range(C.dim(c, y)):
                                    column = slot + m * width + inner + i * sizes[c2] + r
                                    for k in range(C.dim(c, c2)):
                                        value = table[k][i][m]
                                        if value != field.zero:
                                            row = target_offsets[c2] + k * sizes[c2] + r
                                            entries.setdefault(row, {})[column] = value
                        inner += C.dim(c2, y) * sizes[c2]
                matrix = from_dict(entries, total, length, field)
                matrices[change.obj(c, b)] = multiply(matrix, tensor.sections[b])
        return ModuleMap(source.module, target, matrices, check=False)

    # derived functors

    def is_componentwise_projective(self, F, change=None):
        change = change or self.change
        return all(is_projective(change.restrict(F, b)) for b in change.base.objects)

    def left_derived(self, F, cutoff=16):
        """L_i nu(F) from a projective resolution over the total category."""
        zero = zero_module(self.change.total)
        if self.is_componentwise_projective(F):
            return DerivedModules(lambda i: self.nu(F), 0, 0, cutoff, zero, "L nu")
        resolution = projective_resolution(F, cutoff, stop=self.is_componentwise_projective)
        n = resolution.length
        levels = [NuPresentation(self, P) for P in resolution.modules]
        tail = NuPresentation(self, resolution.tail)
        maps = {0: zero_map(levels[0].module, zero)}
        for k, d in enumerate(resolution.differentials, start=1):
            maps[k] = self.nu_map(d, levels[k], levels[k - 1])
        maps[n + 1] = self.nu_map(resolution.tail_inclusion, tail, levels[n])
        modules = [level.module for level in levels] + [tail.module]
        logger.info("  L nu: resolution of length %d (%s)", n, resolution.tail_kind)

        def compute(i):
            incoming = maps[i + 1] if i + 1 in maps else zero_map(zero, modules[i])
            return homology(incoming, maps[i])

        if resolution.tail_kind == "truncated":
            return DerivedModules(compute, n, None, cutoff, zero, "L nu")
        return DerivedModules(compute, n + 1, n + 1, cutoff, zero, "L nu")

    def left_derived_nu(self, F, i, cutoff=16):
        if i < 1:
            raise ValueError("Derived degrees start at 1, got {}".format(i))
        return self.left_derived(F, cutoff).module(i)

    def right_derived(self, G, cutoff=16):
        """R^i nu^-(G) from the dual of a projective resolution of D(G) over the opposite total category."""
        zero = zero_module(self.change.total)
        op_change = self.change.opposite()
        DG = transpose_module(G)

        def stop(K):
            return self.is_componentwise_projective(K, op_change)

        if stop(DG):
            return DerivedModules(lambda i: self.nu_minus(G), 0, 0, cutoff, zero, "R nu^-")
        resolution = projective_resolution(DG, cutoff, stop=stop)
        n = resolution.length
        levels = [NuMinusPresentation(self, transpose_module(P)) for P in resolution.modules]
        tail = NuMinusPresentation(self, transpose_module(resolution.tail))
        maps = {}
        for k, d in enumerate(resolution.differentials, start=1):
            maps[k] = self.nu_minus_map(transpose_map(d), levels[k - 1], levels[k])
        maps[n + 1] = self.nu_minus_map(transpose_map(resolution.tail_inclusion), levels[n], tail)
        maps[n + 2] = zero_map(tail.module, zero)
        modules = [level.module for level in levels] + [tail.module]
        logger.info("  R nu^-: coresolution of length %d (%s)", n, resolution.tail_kind)

        def compute(i):
            incoming = maps[i] if i > 0 else zero_map(zero, modules[0])
            return homology(incoming, maps[i + 1])

        if resolution.tail_kind == "truncated":
            return DerivedModules(compute, n, None, cutoff, zero, "R nu^-")
        return DerivedModules(compute, n + 1, n + 1, cutoff, zero, "R nu^-")

    def right_derived_nu_minus(self, G, i, cutoff=16):
        if i < 1:
            raise ValueError("Derived degrees start at 1, got {}".format(i))
        return self.right_derived(G, cutoff).module(i)

    def coefficient_tor_table(self, F, degrees, cutoff=16):
        """dim Tor^C_i(D(C(c, -)), F(-, b)) per degree and (c, b)."""
        table = {i: {} for i in degrees}
        for c in self.category.objects:
            modules = tor_modules(self.right_coefficient(c), F, cutoff, self.change)
            for i in degrees:
                for b, d in modules.dims(i).items():
                    table[i][self.change.obj(c, b)] = d
        return table

    def coefficient_ext_table(self, G, degrees, cutoff=16):
        """dim Ext^i_C(D(C(-, c)), G(-, b)) per degree and (c, b)."""
        table = {i: {} for i in degrees}
        for c in self.category.objects:
            modules = ext_modules(self.left_coefficient(c), G, cutoff, self.change)
            for i in degrees:
                for b, d in modules.dims(i).items():
                    table[i][self.change.obj(c, b)] = d
        return table

    def gorenstein_dimension(self, cutoff=16):
        if cutoff not in self._gorenstein_dimension:
            self._gorenstein_dimension[cutoff] = gorenstein_dimension_of_P(self.category, cutoff, self)
        return self._gorenstein_dimension[cutoff]


class NuPresentation:
    """nu(F) with the tensor presentations D(C(c, -)) (x)_C F kept for induced maps."""

    def __init__(self, triple, F):
        self.triple = triple
        self.F = F
        C, change, field = triple.category, triple.change, triple.field
        self.parts = {c: TensorPresentation(triple.right_coefficient(c), F, change) for c in C.objects}
        dims, c_maps, b_maps = {}, {}, {}
        for c in C.objects:
            for b in change.base.objects:
                dims[(c, b)] = self.parts[c].module.dims[b]
            for beta in change.base.arrows:
                b_maps[(c, beta.name)] = self.parts[c].module.maps[beta.name]
        for arrow in C.arrows:
            c, c2 = arrow.source, arrow.target
            vector = C.arrow_vectors[arrow.name]
            theta = {x: transpose(C.precomposition_matrix(vector, c, c2, x)) for x in C.objects}
            for b in change.base.objects:
                slot_maps = {x: kronecker_product(theta[x], identity(F.dims[change.obj(x, b)], field))
                             for x in C.objects}
                c_maps[(arrow.name, b)] = self.parts[c].induced(slot_maps, self.parts[c2], b)
        self.module = change.assemble(dims, c_maps, b_maps)


class NuMinusPresentation:
    """nu^-(G) with the hom presentations Hom_C(D(C(-, c)), G) kept for induced maps."""

    def __init__(self, triple, G):
        self.triple = triple
        self.G = G
        C, change, field = triple.category, triple.change, triple.field
        self.parts = {c: HomPresentation(triple.left_coefficient(c), G, change) for c in C.objects}
        dims, c_maps, b_maps = {}, {}, {}
        for c in C.objects:
            for b in change.base.objects:
                dims[(c, b)] = self.parts[c].module.dims[b]
            for beta in change.base.arrows:
                b_maps[(c, beta.name)] = self.parts[c].module.maps[beta.name]
        for arrow in C.arrows:
            c, c2 = arrow.source, arrow.target
            vector = C.arrow_vectors[arrow.name]
            theta = {x: transpose(C.postcomposition_matrix(vector, x, c, c2)) for x in C.objects}
            for b in change.base.objects:
                slot_maps = {x: kronecker_product(identity(G.dims[change.obj(x, b)], field), transpose(theta[x]))
                             for x in C.objects}
                c_maps[(arrow.name, b)] = self.parts[c].induced(slot_maps, self.parts[c2], b)
        self.module = change.assemble(dims, c_maps, b_maps)


def gorenstein_dimension_of_P(category, cutoff=16, triple=None):
    """sup_c pdim D(C(-, c)) and sup_c pdim D(C(c, -)), which agree when both are finite."""
    triple = triple or AdjointTriple(BaseChange(category))
    per_object = {}
    for c in category.objects:
        per_object[c] = {
            "left": pdim(triple.left_coefficient(c), cutoff),
            "right": pdim(triple.right_coefficient(c), cutoff),
        }
        logger.info("  pdim D(C(-, %s)) = %s, pdim D(C(%s, -)) = %s",
                    c, per_object[c]["left"], c, per_object[c]["right"])
    s1 = _sup([values["left"] for values in per_object.values()])
    s2 = _sup([values["right"] for values in per_object.values()])
    if is_finite(s1) and is_finite(s2):
        if s1 != s2:
            raise GorensteinInconsistencyError(
                "Injective coefficient dimensions differ: {} on the left, {} on the right".format(s1, s2))
        return GorensteinDimension(s1, "finite", s1, s2, per_object)
    if is_finite(s1) or is_finite(s2):
        return GorensteinDimension(AtLeast(cutoff), "not-iwanaga-gorenstein-at-cutoff", s1, s2, per_object)
    return GorensteinDimension(AtLeast(cutoff), "at-least", s1, s2, per_object)
