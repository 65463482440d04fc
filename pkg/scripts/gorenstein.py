"""
Membership tests with certificates: Gorenstein P-projectivity, monic
representations, Gorenstein projectivity over the base and in the functor
category, the lifted classes, Gorenstein resolution dimension and the
discrepancy between the two factorizations of a tensor product.

Every test returns a Verdict whose member is "yes", "no" or "inconclusive";
inconclusive verdicts name the cutoff that blocked them.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from itertools import product
from typing import Optional

from .cmod import (AtLeast, InconclusiveAtCutoffError, ModuleMap, ProjectiveModule, Representation, cokernel,
                   compose, ext_modules, hom_basis, hom_complex, is_projective, map_between_projectives,
                   projective_resolution, regular_module)
from .linalg import (NoSolutionError, columns, from_columns, from_rows, hstack, identity, is_zero, kernel as null_space,
                     multiply, rank, solve, vstack, zeros)
from .nakayama import AdjointTriple, gorenstein_dimension_of_P

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_LIMIT = 10 ** 6

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


class NotRelationFreeError(ValueError):
    pass


class SearchSpaceTooLargeError(ValueError):
    pass


@dataclass
class Verdict:
    member: str
    test: str
    certificate: dict = dataclass_field(default_factory=dict)
    hypotheses: dict = dataclass_field(default_factory=dict)
    blocking_cutoff: Optional[int] = None

    def to_dict(self):
        return {
            "member": self.member,
            "test": self.test,
            "certificate": self.certificate,
            "hypotheses": self.hypotheses,
            "blocking_cutoff": self.blocking_cutoff,
        }


def combine(test, verdicts, certificate=None, hypotheses=None):
    """Conjunction: no beats inconclusive beats yes."""
    members = [v.member for v in verdicts]
    if NO in members:
        member = NO
    elif INCONCLUSIVE in members:
        member = INCONCLUSIVE
    else:
        member = YES
    blocking = next((v.blocking_cutoff for v in verdicts if v.blocking_cutoff is not None), None)
    return Verdict(member, test, certificate or {}, hypotheses or {}, blocking if member == INCONCLUSIVE else None)


@dataclass
class BaseGorensteinProfile:
    base: object
    g: Optional[int]
    status: str

    @property
    def is_finite(self):
        return self.g is not None

    def to_dict(self):
        return {"base": self.base.name, "self_injective_dimension": self.g, "status": self.status}


def declared_profile(base, g):
    return BaseGorensteinProfile(base, g, "declared")


def self_injective_dimension(base, cutoff=16):
    """pdim D(base) on both sides, as a base profile."""
    dimension = gorenstein_dimension_of_P(base, cutoff)
    if dimension.is_finite:
        return BaseGorensteinProfile(base, dimension.value, "verified-at-cutoff")
    return BaseGorensteinProfile(base, None, dimension.status)


def _nonzero(dims):
    return any(d for d in dims.values())


def _scan(table, degrees, name, certificate):
    """Walk derived degrees; returns "no", "blocked" or None when all vanish."""
    values = certificate.setdefault(name, {})
    for i in degrees:
        try:
            dims = table.dims(i)
        except InconclusiveAtCutoffError:
            return "blocked"
        values[str(i)] = dims
        if _nonzero(dims):
            return NO
    return None


def _derived_degrees(table, cutoff):
    if table.vanishes_above is not None:
        return range(1, table.vanishes_above + 1)
    return range(1, cutoff + 2)


def is_gproj_P(F, triple, cutoff=16, route="auto"):
    """Gorenstein P-projectivity of F for P = i_! i^*.

    route "auto" uses the vanishing of L_i nu for 1 <= i <= n when P is n-Gorenstein
    and the full criterion (vanishing of L nu and R nu^- nu, lambda an isomorphism)
    otherwise; "full" forces the full criterion.
    """
    if route not in ("auto", "full"):
        raise ValueError("Unknown route {!r}".format(route))
    dimension = triple.gorenstein_dimension(cutoff)
    hypotheses = {"P_gorenstein_dimension": str(dimension.value), "P_status": dimension.status, "cutoff": cutoff}
    certificate = {}
    if dimension.is_finite and route == "auto":
        certificate["route"] = "iwanaga-gorenstein"
        table = triple.left_derived(F, cutoff)
        outcome = _scan(table, range(1, dimension.value + 1), "L_nu", certificate)
        if outcome == NO:
            return Verdict(NO, "gproj-p", certificate, hypotheses)
        if outcome == "blocked":
            return Verdict(INCONCLUSIVE, "gproj-p", certificate, hypotheses, cutoff)
        return Verdict(YES, "gproj-p", certificate, hypotheses)

    certificate["route"] = "vanishing-and-unit"
    left = triple.left_derived(F, cutoff)
    left_outcome = _scan(left, _derived_degrees(left, cutoff), "L_nu", certificate)
    if left_outcome == NO:
        return Verdict(NO, "gproj-p", certificate, hypotheses)
    nu_presentation = triple.nu_presentation(F)
    right = triple.right_derived(nu_presentation.module, cutoff)
    right_outcome = _scan(right, _derived_degrees(right, cutoff), "R_nu_minus_of_nu", certificate)
    if right_outcome == NO:
        return Verdict(NO, "gproj-p", certificate, hypotheses)
    unit, is_iso = triple.unit_lambda(F, nu_presentation)
    certificate["lambda_ranks"] = unit.ranks()
    certificate["lambda_is_iso"] = is_iso
    if not is_iso:
        failing = [x for x, r in unit.ranks().items() if not (r == F.dims[x] == unit.target.dims[x])]
        certificate["lambda_failure_object"] = failing[0]
        return Verdict(NO, "gproj-p", certificate, hypotheses)
    if "blocked" in (left_outcome, right_outcome):
        return Verdict(INCONCLUSIVE, "gproj-p", certificate, hypotheses, cutoff)
    return Verdict(YES, "gproj-p", certificate, hypotheses)


def is_monic(F, change):
    """Injectivity of (+)_{a: y -> x} F(y) -> F(x) at every vertex x."""
    C, field = change.category, change.field
    if C.relations:
        raise NotRelationFreeError("Category {} has relations; use the gproj-p check instead".format(C.name))
    ranks = {}
    for b in change.base.objects:
        for x in C.objects:
            incoming = C.quiver.arrows_into(x)
            if not incoming:
                continue
            target = F.dims[change.obj(x, b)]
            matrix = hstack([F.maps[change.c_arrow(a.name, b)] for a in incoming], target, field)
            subspace = null_space(matrix)
            ranks[change.obj(x, b)] = matrix.shape[1] - subspace.dim
            if subspace.dim:
                vector = columns(subspace.basis)[0]
                witness, start = {}, 0
                for a in incoming:
                    size = F.dims[change.obj(a.source, b)]
                    witness[a.name] = [field.literal(v) for v in vector[start:start + size]]
                    start += size
                certificate = {"vertex": x, "base_object": b, "kernel_vector": witness}
                return Verdict(NO, "monic", certificate, {"relation_free": True})
    return Verdict(YES, "monic", {"assembled_ranks": ranks}, {"relation_free": True})


def base_gp(B, profile, cutoff=16):
    """Gorenstein projectivity of a module over the base algebra."""
    hypotheses = profile.to_dict()
    hypotheses["cutoff"] = cutoff
    if is_projective(B):
        return Verdict(YES, "base-gp", {"projective": True}, hypotheses)
    resolution = projective_resolution(B, cutoff)
    if resolution.tail_kind == "zero":
        # finite projective dimension and not projective
        return Verdict(NO, "base-gp", {"pdim": resolution.length}, hypotheses)
    if profile.g == 0:
        return Verdict(YES, "base-gp", {"self_injective_base": True}, hypotheses)
    ext = ext_modules(B, regular_module(B.category), cutoff)
    certificate = {"Ext_into_regular": {}}
    degrees = range(1, profile.g + 1) if profile.is_finite else range(1, cutoff)
    for i in degrees:
        try:
            dims = ext.dims(i)
        except InconclusiveAtCutoffError:
            return Verdict(INCONCLUSIVE, "base-gp", certificate, hypotheses, cutoff)
        certificate["Ext_into_regular"][str(i)] = sum(dims.values())
        if _nonzero(dims):
            return Verdict(NO, "base-gp", certificate, hypotheses)
    if profile.is_finite:
        return Verdict(YES, "base-gp", certificate, hypotheses)
    return Verdict(INCONCLUSIVE, "base-gp", certificate, hypotheses, cutoff)


def _components(triple, F):
    nu_F = triple.nu(F)
    return {c: triple.change.component(nu_F, c) for c in triple.category.objects}


def _scope(triple, profile, cutoff):
    if triple.gorenstein_dimension(cutoff).is_finite or profile.is_finite:
        return "GP"
    return "GP(GProj_P)"


def is_gp_functor(F, triple, profile=None, cutoff=16):
    """GProj_P membership together with Gorenstein projectivity of every component of nu(F)."""
    profile = profile or self_injective_dimension(triple.change.base, cutoff)
    gproj = is_gproj_P(F, triple, cutoff)
    verdicts = [gproj]
    certificate = {"gproj_p": gproj.to_dict(), "components": {}}
    if gproj.member != NO:
        for c, component in _components(triple, F).items():
            verdict = base_gp(component, profile, cutoff)
            certificate["components"][c] = verdict.to_dict()
            verdicts.append(verdict)
            if verdict.member == NO:
                break
    hypotheses = {"scope": _scope(triple, profile, cutoff), "base_profile": profile.to_dict(), "cutoff": cutoff,
                  "P_gorenstein_dimension": str(triple.gorenstein_dimension(cutoff).value)}
    return combine("gp", verdicts, certificate, hypotheses)


def is_p_projective(F, triple):
    """F is a summand of i_! i^* F: the counit has a section."""
    field = F.field
    counit = triple.shriek_counit(F)
    maps = hom_basis(F, counit.source)
    objects = F.category.objects

    def flatten(f):
        return [a for x in objects for row in f.matrices[x].to_list() for a in row]

    target = [a for x in objects for row in identity(F.dims[x], field).to_list() for a in row]
    certificate = {"hom_dim": len(maps)}
    if not target:
        return Verdict(YES, "p-projective", certificate)
    system = from_columns([flatten(compose(counit, h)) for h in maps], len(target), field)
    try:
        coefficients = solve(system, target)
    except NoSolutionError:
        return Verdict(NO, "p-projective", certificate)
    certificate["section_coefficients"] = [field.literal(a) for a in coefficients]
    return Verdict(YES, "p-projective", certificate)


def lifted_class_membership(F, triple, x_class, f_class, profile=None, cutoff=16):
    """Membership in X intersected with the preimage of the base class under i^* nu."""
    if x_class not in ("gproj_P", "P_proj"):
        raise ValueError("Unknown x_class {!r}".format(x_class))
    if f_class not in ("gp", "proj"):
        raise ValueError("Unknown f_class {!r}".format(f_class))
    profile = profile or self_injective_dimension(triple.change.base, cutoff)
    x_verdict = is_gproj_P(F, triple, cutoff) if x_class == "gproj_P" else is_p_projective(F, triple)
    verdicts = [x_verdict]
    certificate = {"x_side": x_verdict.to_dict(), "f_side": {}}
    if x_verdict.member != NO:
        for c, component in _components(triple, F).items():
            if f_class == "gp":
                verdict = base_gp(component, profile, cutoff)
            else:
                verdict = Verdict(YES if is_projective(component) else NO, "base-projective",
                                  {"dims": component.dims})
            certificate["f_side"][c] = verdict.to_dict()
            verdicts.append(verdict)
    hypotheses = {"x_class": x_class, "f_class": f_class, "cutoff": cutoff}
    return combine("lifted", verdicts, certificate, hypotheses)


@dataclass
class GPResolutionDimension:
    value: object
    exact: bool
    stages: list


def gp_resolution_dimension(F, triple, profile=None, cutoff=16):
    """The first syzygy of the minimal resolution that is Gorenstein projective in the functor category."""
    profile = profile or self_injective_dimension(triple.change.base, cutoff)
    resolution = projective_resolution(F, cutoff)
    stages = [F] + resolution.syzygies
    exact = True
    records = []
    for n, K in enumerate(stages):
        verdict = is_gp_functor(K, triple, profile, cutoff)
        records.append(verdict.member)
        if verdict.member == YES:
            return GPResolutionDimension(n, exact, records)
        if verdict.member == INCONCLUSIVE:
            exact = False
    return GPResolutionDimension(AtLeast(len(stages) - 1), False, records)


def transport(F, source_change, target_change):
    """Move a module between the two factorizations of the same tensor product."""
    dims = {source_change.swap_label(x): d for x, d in F.dims.items()}
    maps = {source_change.swap_label(a): m for a, m in F.maps.items()}
    return Representation(target_change.total, dims, maps)


def loop_profile(F, change):
    """Kernel and image dimensions of every loop of C acting on F."""
    result = {}
    for loop in change.category.quiver.loops():
        per_base = {}
        for b in change.base.objects:
            matrix = F.maps[change.c_arrow(loop.name, b)]
            r = rank(matrix)
            per_base[b] = {"kernel": matrix.shape[1] - r, "image": r}
        result[loop.name] = {
            "per_base_object": per_base,
            "kernel": sum(v["kernel"] for v in per_base.values()),
            "image": sum(v["image"] for v in per_base.values()),
        }
    return result


@dataclass
class DiscrepancyProbe:
    first: Verdict
    second: Verdict
    loops: dict

    @property
    def is_witness(self):
        return {self.first.member, self.second.member} == {YES, NO}

    def to_dict(self):
        return {"first": self.first.to_dict(), "second": self.second.to_dict(), "loops": self.loops,
                "is_witness": self.is_witness}


def discrepancy_probe(M, change, cutoff=16, profiles=None):
    """GP-functor membership of M under the given factorization and under the swapped one."""
    swapped = change.swap()
    N = transport(M, change, swapped)
    profiles = profiles or (self_injective_dimension(change.base, cutoff),
                            self_injective_dimension(swapped.base, cutoff))
    first = is_gp_functor(M, AdjointTriple(change), profiles[0], cutoff)
    second = is_gp_functor(N, AdjointTriple(swapped), profiles[1], cutoff)
    loops = {
        "first": loop_profile(M, change),
        "second": loop_profile(N, swapped),
    }
    logger.info("  Discrepancy probe: %s / %s", first.member, second.member)
    return DiscrepancyProbe(first, second, loops)


def raw_search_space(category, bounds):
    p = category.field.characteristic
    total = 0
    for dims in product(*(range(bounds[x] + 1) for x in category.objects)):
        dims = dict(zip(category.objects, dims))
        total += p ** sum(dims[a.target] * dims[a.source] for a in category.arrows)
    return total


def _bounds(category, dim_bound):
    if isinstance(dim_bound, int):
        return {x: dim_bound for x in category.objects}
    if isinstance(dim_bound, (list, tuple)):
        return dict(zip(category.objects, dim_bound))
    return {x: dim_bound.get(x, 0) for x in category.objects}


def enumerate_representations(category, dim_bound, limit=DEFAULT_ENUMERATION_LIMIT):
    """Every representation over F_p with dims bounded per object, in a fixed order."""
    field = category.field
    if not field.characteristic:
        raise ValueError("Enumeration needs a prime field")
    bounds = _bounds(category, dim_bound)
    size = raw_search_space(category, bounds)
    if size > limit:
        raise SearchSpaceTooLargeError("Raw search space has {} assignments, limit is {}".format(size, limit))
    logger.info("  Num raw assignments = %d", size)
    elements = field.elements()
    for values in product(*(range(bounds[x] + 1) for x in category.objects)):
        dims = dict(zip(category.objects, values))
        shapes = [(a.name, dims[a.target], dims[a.source]) for a in category.arrows]
        count = sum(rows * cols for _, rows, cols in shapes)
        for entries in product(elements, repeat=count):
            maps, start = {}, 0
            for name, rows, cols in shapes:
                flat = entries[start:start + rows * cols]
                maps[name] = from_rows([flat[r * cols:(r + 1) * cols] for r in range(rows)], field, cols=cols)
                start += rows * cols
            representation = Representation(category, dims, maps, check=False)
            if not representation.failing_relations():
                yield representation


def _random_scalar(field, rng):
    if field.characteristic:
        return field(rng.randrange(field.characteristic))
    return field(rng.randint(-3, 3))


def random_representation(category, rng, max_summands=2):
    """Cokernel of a random map between sums of representables."""
    objects = list(category.objects)
    P = ProjectiveModule(category, [rng.choice(objects) for _ in range(rng.randint(1, max_summands))])
    Q = ProjectiveModule(category, [rng.choice(objects) for _ in range(rng.randint(0, max_summands))])
    blocks = {}
    for s, x in enumerate(Q.summands):
        for t, y in enumerate(P.summands):
            blocks[(t, s)] = [_random_scalar(category.field, rng) for _ in range(category.dim(y, x))]
    f = map_between_projectives(Q, P, blocks)
    module, _ = cokernel(f)
    return module


def left_approximation(M):
    """M -> (+)_y P_y^{dim Hom(M, P_y)} through a basis of every Hom(M, P_y)."""
    A, field = M.category, M.field
    summands, maps = [], []
    for y in A.objects:
        for h in hom_basis(M, ProjectiveModule(A, [y])):
            summands.append(y)
            maps.append(h)
    Q = ProjectiveModule(A, summands)
    matrices = {}
    for x in A.objects:
        blocks = [h.matrices[x] for h in maps]
        matrices[x] = vstack(blocks, M.dims[x], field) if blocks else zeros(0, M.dims[x], field)
    return Q, ModuleMap(M, Q, matrices, check=False)


def _exact_at(f, g):
    """Exactness of X -f-> Y -g-> Z at Y, objectwise."""
    for x in f.matrices:
        if not is_zero(multiply(g.matrices[x], f.matrices[x])):
            return False
        if g.source.dims[x] - rank(g.matrices[x]) != rank(f.matrices[x]):
            return False
    return True


def totally_acyclic_window(F, width=2):
    """P_{w-1} -> ... -> P_0 -> Q^0 -> ... -> Q^{w-1} around F, with exactness records."""
    resolution = projective_resolution(F, width)
    left = [d for d in resolution.differentials[:width - 1]]
    left.reverse()
    coaugmentations, projections = [], []
    current = F
    for _ in range(width):
        Q, iota = left_approximation(current)
        coaugmentations.append(iota)
        current, projection = cokernel(iota)
        projections.append(projection)
    window = left + [compose(coaugmentations[0], resolution.augmentation)]
    for k in range(width - 1):
        window.append(compose(coaugmentations[k + 1], projections[k]))
    exact = [_exact_at(f, g) for f, g in zip(window, window[1:])]
    hom_exact = {}
    for y in F.category.objects:
        dual_maps = hom_complex(window, ProjectiveModule(F.category, [y]))
        hom_exact[y] = [_exact_at(g, f) for f, g in zip(dual_maps, dual_maps[1:])]
    certificate = {
        "width": width,
        "dims": [f.source.total_dim() for f in window] + [window[-1].target.total_dim()],
        "exact": exact,
        "hom_exact": hom_exact,
    }
    member = YES if all(exact) and all(all(v) for v in hom_exact.values()) else NO
    return Verdict(member, "totally-acyclic-window", certificate, {"window_width": width})
