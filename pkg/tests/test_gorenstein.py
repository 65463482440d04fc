import os
import random
from itertools import product
from unittest import TestCase

from scripts.category import BaseChange
from scripts.cmod import (ProjectiveModule, Representation, cokernel, direct_sum_modules, image, map_from_projective,
                          representable, simple)
from scripts.formats import load_category, load_representation
from scripts.gorenstein import (NotRelationFreeError, SearchSpaceTooLargeError, base_gp, declared_profile,
                                discrepancy_probe, enumerate_representations, gp_resolution_dimension, is_gp_functor,
                                is_gproj_P, is_monic, is_p_projective, lifted_class_membership, random_representation,
                                self_injective_dimension, totally_acyclic_window, transport)
from scripts.linalg import Field, from_rows, hstack, rank, scale, vstack
from scripts.nakayama import AdjointTriple

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures")


def fixture(name, field=None):
    return load_category(os.path.join(FIXTURES, name + ".json"), field)


def module_fixture(name, field=None):
    return load_representation(os.path.join(FIXTURES, name + ".json"), field)


class MonicTestCase(TestCase):

    def test_zero_map_has_kernel_witness(self):
        loaded = module_fixture("a2_zero_map")
        verdict = is_monic(loaded.module, loaded.change)
        self.assertEqual(verdict.member, "no")
        self.assertEqual(verdict.certificate["vertex"], "2")
        self.assertEqual(verdict.certificate["kernel_vector"], {"a": ["1"]})

    def test_assembled_map_injective(self):
        loaded = module_fixture("two_into_one_diagonal")
        self.assertEqual(is_monic(loaded.module, loaded.change).member, "yes")

    def test_two_branches_into_a_line(self):
        category = fixture("two_into_one")
        one = from_rows([[1]], category.field)
        F = Representation(category, {"1": 1, "2": 1, "3": 1}, {"a": one, "b": one})
        verdict = is_monic(F, BaseChange(category))
        self.assertEqual(verdict.member, "no")
        self.assertEqual(verdict.certificate["kernel_vector"], {"a": ["-1"], "b": ["1"]})

    def test_relations_rejected(self):
        square = fixture("square")
        with self.assertRaises(NotRelationFreeError):
            is_monic(representable(square, "c1"), BaseChange(square))

    def test_monic_agrees_with_gproj_p(self):
        kA3 = fixture("kA3", Field(2))
        triple = AdjointTriple(BaseChange(kA3))
        count = 0
        for F in enumerate_representations(kA3, 2):
            self.assertEqual(is_monic(F, triple.change).member, is_gproj_P(F, triple, cutoff=4).member)
            count += 1
        self.assertEqual(count, 499)


class GorensteinPProjectiveTestCase(TestCase):

    def setUp(self) -> None:
        self.square = fixture("square", Field(2))
        self.triple = AdjointTriple(BaseChange(self.square))

    def pullback_with_monos(self, F):
        dims, maps = F.dims, F.maps
        if rank(maps["beta"]) != dims["c2"] or rank(maps["gamma"]) != dims["c3"]:
            return False
        into = vstack([maps["alpha"], maps["mu"]], dims["c1"], F.field)
        out = hstack([maps["beta"], scale(maps["gamma"], -F.field.one)], dims["c4"], F.field)
        middle = dims["c2"] + dims["c3"]
        return rank(into) == dims["c1"] and rank(into) == middle - rank(out)

    def test_routes_agree_on_square(self):
        for F in enumerate_representations(self.square, 1):
            shortcut = is_gproj_P(F, self.triple, cutoff=6)
            full = is_gproj_P(F, self.triple, cutoff=6, route="full")
            self.assertEqual(shortcut.certificate["route"], "iwanaga-gorenstein")
            self.assertEqual(full.certificate["route"], "vanishing-and-unit")
            self.assertEqual(shortcut.member, full.member, F.dims)
            self.assertEqual(shortcut.member == "yes", self.pullback_with_monos(F), F.dims)

    def test_full_route_on_kA2(self):
        kA2 = fixture("kA2")
        triple = AdjointTriple(BaseChange(kA2))
        S1 = simple(kA2, "1")
        verdict = is_gproj_P(S1, triple, route="full")
        self.assertEqual(verdict.member, "no")
        self.assertEqual(verdict.certificate["L_nu"]["1"], {"1": 0, "2": 1})
        self.assertNotIn("lambda_is_iso", verdict.certificate)

    def test_full_route_checks_unit(self):
        loaded = module_fixture("a2_split_mono")
        verdict = is_gproj_P(loaded.module, AdjointTriple(loaded.change), route="full")
        self.assertEqual(verdict.member, "yes")
        self.assertTrue(verdict.certificate["lambda_is_iso"])
        self.assertEqual(verdict.certificate["lambda_ranks"], {"1": 1, "2": 2})

    def test_unknown_route(self):
        with self.assertRaises(ValueError):
            is_gproj_P(representable(self.square, "c1"), self.triple, route="fast")


class BaseGorensteinProjectiveTestCase(TestCase):

    def test_semisimple_base(self):
        point = AdjointTriple(BaseChange(fixture("kA2"))).change.base
        profile = self_injective_dimension(point)
        self.assertEqual(profile.g, 0)
        self.assertEqual(base_gp(Representation(point, {"*": 3}), profile).member, "yes")

    def test_self_injective_base(self):
        loop = fixture("loop_x2")
        profile = self_injective_dimension(loop, cutoff=4)
        self.assertEqual(profile.g, 0)
        self.assertEqual(base_gp(simple(loop, "1"), profile).member, "yes")

    def test_hereditary_base(self):
        kA2 = fixture("kA2")
        profile = self_injective_dimension(kA2, cutoff=4)
        self.assertEqual(profile.g, 1)
        self.assertEqual(base_gp(simple(kA2, "1"), profile).member, "no")
        self.assertEqual(base_gp(representable(kA2, "1"), profile).member, "yes")

    def test_simple_with_nonsplit_self_extension_to_regular(self):
        lambda1 = fixture("lambda1")
        profile = self_injective_dimension(lambda1, cutoff=6)
        verdict = base_gp(simple(lambda1, "2"), profile, cutoff=6)
        self.assertEqual(verdict.member, "no")

    def test_unknown_profile_never_says_yes(self):
        lambda1 = fixture("lambda1")
        profile = declared_profile(lambda1, None)
        profile.status = "unknown"
        verdict = base_gp(simple(lambda1, "2"), profile, cutoff=4)
        self.assertIn(verdict.member, ("no", "inconclusive"))


class GorensteinProjectiveFunctorTestCase(TestCase):

    def setUp(self) -> None:
        self.kA2 = fixture("kA2")
        self.triple = AdjointTriple(BaseChange(self.kA2))

    def test_morphisms_of_vector_spaces(self):
        for name, expected in (("a2_identity", "yes"), ("a2_zero_map", "no"), ("a2_simple1", "no"),
                               ("a2_split_mono", "yes")):
            loaded = module_fixture(name)
            verdict = is_gp_functor(loaded.module, AdjointTriple(loaded.change), cutoff=4)
            self.assertEqual(verdict.member, expected, name)
            self.assertEqual(verdict.hypotheses["scope"], "GP")

    def test_trivial_base_adds_nothing(self):
        for category in (fixture("square", Field(2)), fixture("cyclic3", Field(2))):
            triple = AdjointTriple(BaseChange(category))
            for F in enumerate_representations(category, 1):
                gp = is_gp_functor(F, triple, cutoff=6)
                self.assertEqual(gp.member, is_gproj_P(F, triple, cutoff=6).member, F.dims)

    def test_closed_under_sums_and_summands(self):
        kA2 = fixture("kA2", Field(2))
        triple = AdjointTriple(BaseChange(kA2))
        modules = list(enumerate_representations(kA2, 1))
        members = {k: is_gp_functor(F, triple, cutoff=4).member for k, F in enumerate(modules)}
        for (i, F), (j, G) in product(enumerate(modules), repeat=2):
            total, _, _ = direct_sum_modules([F, G])
            both = members[i] == "yes" and members[j] == "yes"
            self.assertEqual(is_gp_functor(total, triple, cutoff=4).member == "yes", both)

    def test_closed_under_extensions(self):
        rng = random.Random(29)
        for name in ("kA2", "square"):
            category = fixture(name, Field(3))
            triple = AdjointTriple(BaseChange(category))
            checked = 0
            for _ in range(20):
                E = random_representation(category, rng)
                P = ProjectiveModule(category, [rng.choice(category.objects) for _ in range(rng.randint(1, 2))])
                elements = [[Field(3)(rng.randrange(3)) for _ in range(E.dims[x])] for x in P.summands]
                A, inclusion = image(map_from_projective(P, E, elements))
                C, _ = cokernel(inclusion)
                ends = [is_gp_functor(M, triple, cutoff=6).member for M in (A, C)]
                if ends == ["yes", "yes"]:
                    checked += 1
                    self.assertEqual(is_gp_functor(E, triple, cutoff=6).member, "yes", name)
            self.assertGreater(checked, 0, name)

    def test_lifted_classes(self):
        loaded = module_fixture("a2_split_mono")
        F, triple = loaded.module, AdjointTriple(loaded.change)
        self.assertEqual(lifted_class_membership(F, triple, "gproj_P", "proj", cutoff=4).member, "yes")
        self.assertEqual(lifted_class_membership(F, triple, "gproj_P", "gp", cutoff=4).member,
                         is_gp_functor(F, triple, cutoff=4).member)
        parts = {c: Representation(triple.change.base, {"*": 1}) for c in self.kA2.objects}
        induced = triple.i_shriek(parts)
        self.assertEqual(lifted_class_membership(induced, triple, "P_proj", "proj", cutoff=4).member, "yes")
        with self.assertRaises(ValueError):
            lifted_class_membership(F, triple, "gproj", "proj")

    def test_p_projective(self):
        self.assertEqual(is_p_projective(representable(self.kA2, "1"), self.triple).member, "yes")
        self.assertEqual(is_p_projective(simple(self.kA2, "1"), self.triple).member, "no")


class ResolutionDimensionTestCase(TestCase):

    def test_simple_of_kA2(self):
        kA2 = fixture("kA2")
        triple = AdjointTriple(BaseChange(kA2))
        result = gp_resolution_dimension(simple(kA2, "1"), triple, cutoff=4)
        self.assertEqual(result.value, 1)
        self.assertTrue(result.exact)
        self.assertEqual(gp_resolution_dimension(representable(kA2, "2"), triple, cutoff=4).value, 0)

    def test_bounded_on_square(self):
        square = fixture("square", Field(5))
        triple = AdjointTriple(BaseChange(square))
        rng = random.Random(5)
        for _ in range(30):
            F = random_representation(square, rng)
            result = gp_resolution_dimension(F, triple, cutoff=6)
            self.assertLessEqual(result.value, 2)


class DiscrepancyTestCase(TestCase):

    def setUp(self) -> None:
        self.loaded = module_fixture("discrepancy_m_p2")

    def test_transport_matches_bundled_module(self):
        other = module_fixture("discrepancy_m_p1")
        swapped = self.loaded.change.swap()
        self.assertEqual(transport(self.loaded.module, self.loaded.change, swapped), other.module)

    def test_member_under_one_factorization_only(self):
        probe = discrepancy_probe(self.loaded.module, self.loaded.change, cutoff=6)
        self.assertEqual(probe.first.member, "yes")
        self.assertEqual(probe.second.member, "no")
        self.assertTrue(probe.is_witness)
        loop = probe.loops["second"]["b"]
        self.assertEqual((loop["kernel"], loop["image"]), (2, 1))

    def test_zero_and_projective_modules(self):
        change = self.loaded.change
        zero = Representation(change.total, {})
        probe = discrepancy_probe(zero, change, cutoff=4)
        self.assertEqual((probe.first.member, probe.second.member), ("yes", "yes"))
        projective = representable(change.total, "2|2")
        probe = discrepancy_probe(projective, change, cutoff=4)
        self.assertEqual((probe.first.member, probe.second.member), ("yes", "yes"))


class EnumerationTestCase(TestCase):

    def test_counts(self):
        kA2 = fixture("kA2", Field(2))
        self.assertEqual(len(list(enumerate_representations(kA2, 1))), 5)
        self.assertEqual(len(list(enumerate_representations(kA2, (0, 0)))), 1)
        loop = fixture("loop_x2", Field(2))
        square_zero = [F for F in enumerate_representations(loop, 2) if F.dims["1"] == 2]
        self.assertEqual(len(square_zero), 4)

    def test_deterministic_order(self):
        kA2 = fixture("kA2", Field(3))
        first = [F.dims for F in enumerate_representations(kA2, 1)]
        second = [F.dims for F in enumerate_representations(kA2, 1)]
        self.assertEqual(first, second)

    def test_limit(self):
        kA3 = fixture("kA3", Field(2))
        with self.assertRaises(SearchSpaceTooLargeError):
            list(enumerate_representations(kA3, 2, limit=100))
        with self.assertRaises(ValueError):
            list(enumerate_representations(fixture("kA2"), 1))


class TotallyAcyclicWindowTestCase(TestCase):

    def test_windows_around_gorenstein_projectives(self):
        for name in ("a2_identity", "a2_split_mono"):
            F = module_fixture(name).module
            verdict = totally_acyclic_window(F, width=2)
            self.assertEqual(verdict.member, "yes", name)
            self.assertTrue(all(verdict.certificate["exact"]))
        loop = fixture("loop_x2")
        verdict = totally_acyclic_window(simple(loop, "1"), width=3)
        self.assertEqual(verdict.member, "yes")
        self.assertEqual(len(verdict.certificate["dims"]), 6)

    def test_window_breaks_for_simple(self):
        kA2 = fixture("kA2")
        verdict = totally_acyclic_window(simple(kA2, "1"), width=2)
        self.assertEqual(verdict.member, "no")
