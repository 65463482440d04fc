import os
import random
from unittest import TestCase

from scripts.category import BaseChange, point_category, tensor_category
from scripts.cmod import Representation, compose, hom_basis, identity_map, representable
from scripts.formats import load_category
from scripts.gorenstein import enumerate_representations, is_gproj_P, random_representation
from scripts.linalg import Field, from_rows, rank
from scripts.nakayama import AdjointTriple, gorenstein_dimension_of_P

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures")

INSTANCES = 50


def fixture(name, field=None):
    return load_category(os.path.join(FIXTURES, name + ".json"), field)


def random_parts(category, rng, largest=2):
    point = point_category(category.field)
    return {c: Representation(point, {"*": rng.randint(0, largest)}) for c in category.objects}


class NakayamaFunctorTestCase(TestCase):

    def setUp(self) -> None:
        self.field = Field(5)
        self.kA2 = fixture("kA2", self.field)
        self.triple = AdjointTriple(BaseChange(self.kA2))
        self.rng = random.Random(11)

    def random_morphism(self):
        rows, cols = self.rng.randint(0, 4), self.rng.randint(0, 4)
        matrix = from_rows([[self.rng.randrange(5) for _ in range(cols)] for _ in range(rows)], self.field, cols=cols)
        return Representation(self.kA2, {"1": cols, "2": rows}, {"a": matrix})

    def test_representables_go_to_injectives(self):
        self.assertEqual(self.triple.nu(representable(self.kA2, "1")).dims, {"1": 1, "2": 0})
        self.assertEqual(self.triple.nu(representable(self.kA2, "2")).dims, {"1": 1, "2": 1})
        for c in self.kA2.objects:
            injective = self.triple.left_coefficient(c)
            self.assertEqual(self.triple.nu_minus(injective).dims, representable(self.kA2, c).dims)

    def test_morphism_category_laws(self):
        for _ in range(50):
            F = self.random_morphism()
            d1, d2 = F.dims["1"], F.dims["2"]
            r = rank(F.maps["a"])
            self.assertEqual(self.triple.nu(F).dims, {"1": d2, "2": d2 - r})
            derived = self.triple.left_derived(F, cutoff=4)
            self.assertEqual(derived.dims(1), {"1": 0, "2": d1 - r})
            self.assertEqual(derived.dims(2), {"1": 0, "2": 0})
            verdict = is_gproj_P(F, self.triple, cutoff=4)
            self.assertEqual(verdict.member, "yes" if r == d1 else "no")

    def test_coefficient_route_matches_resolution_route(self):
        for _ in range(10):
            F = self.random_morphism()
            table = self.triple.coefficient_tor_table(F, [1], cutoff=4)
            self.assertEqual(table[1], self.triple.left_derived(F, cutoff=4).dims(1))

    def test_unit_on_gorenstein_projective(self):
        F = Representation(self.kA2, {"1": 1, "2": 2}, {"a": from_rows([[1], [0]], self.field)})
        _, is_iso = self.triple.unit_lambda(F)
        self.assertTrue(is_iso)
        S1 = Representation(self.kA2, {"1": 1})
        _, is_iso = self.triple.unit_lambda(S1)
        self.assertFalse(is_iso)

    def test_derived_functors_by_degree(self):
        for _ in range(20):
            F = self.random_morphism()
            kernel = F.dims["1"] - rank(F.maps["a"])
            self.assertEqual(self.triple.left_derived_nu(F, 1, cutoff=4).dims, {"1": 0, "2": kernel})
            self.assertTrue(self.triple.left_derived_nu(F, 2, cutoff=4).is_zero())
            expected = self.triple.coefficient_ext_table(F, [1], cutoff=4)[1]
            self.assertEqual(self.triple.right_derived_nu_minus(F, 1, cutoff=4).dims, expected)
        S1 = Representation(self.kA2, {"1": 1})
        zero_map = Representation(self.kA2, {"1": 1, "2": 1})
        self.assertEqual(self.triple.right_derived_nu_minus(S1, 1, cutoff=4).dims, {"1": 0, "2": 0})
        self.assertEqual(self.triple.right_derived_nu_minus(zero_map, 1, cutoff=4).dims, {"1": 1, "2": 0})

    def test_derived_degrees_start_at_one(self):
        F = self.random_morphism()
        with self.assertRaises(ValueError):
            self.triple.left_derived_nu(F, 0)
        with self.assertRaises(ValueError):
            self.triple.right_derived_nu_minus(F, 0)


class GorensteinDimensionTestCase(TestCase):

    def test_dimension_table(self):
        expected = {"kA3": 1, "square": 2, "chain2": 2, "chain3": 3, "cyclic3": 0, "loop_x2": 0, "kA2": 1}
        for name, value in expected.items():
            dimension = gorenstein_dimension_of_P(fixture(name), cutoff=8)
            self.assertEqual(dimension.status, "finite", name)
            self.assertEqual(dimension.value, value, name)
            self.assertEqual(dimension.s1, dimension.s2, name)

    def test_self_injective_loop_has_injective_representable(self):
        dimension = gorenstein_dimension_of_P(fixture("loop_x2"), cutoff=4)
        self.assertEqual(dimension.per_object["1"], {"left": 0, "right": 0})

    def test_tensor_products_stay_within_the_sum(self):
        for first, second in (("kA2", "kA2"), ("kA2", "loop_x2")):
            left, right = fixture(first), fixture(second)
            dimension = gorenstein_dimension_of_P(tensor_category(left, right), cutoff=8)
            bound = (gorenstein_dimension_of_P(left, cutoff=8).value +
                     gorenstein_dimension_of_P(right, cutoff=8).value)
            self.assertEqual(dimension.status, "finite", (first, second))
            self.assertLessEqual(dimension.value, bound, (first, second))


class AdjunctionTestCase(TestCase):

    def setUp(self) -> None:
        self.rng = random.Random(3)
        self.categories = [fixture(name, Field(3)) for name in ("kA2", "loop_x2", "square", "cyclic3", "lambda1")]

    def test_shriek_triangle_identities(self):
        for category in self.categories:
            triple = AdjointTriple(BaseChange(category))
            for _ in range(INSTANCES):
                parts = random_parts(category, self.rng)
                shriek = triple.i_shriek(parts)
                unit = triple.shriek_unit(parts)
                target = triple.i_shriek(triple.i_star(shriek))
                lifted = triple.i_shriek_map(unit, source=shriek, target=target)
                counit = triple.shriek_counit(shriek, source=target)
                self.assertEqual(compose(counit, lifted), identity_map(shriek), category.name)

                F = random_representation(category, self.rng)
                restricted = triple.i_star(F)
                unit = triple.shriek_unit(restricted)
                counit = triple.i_star_map(triple.shriek_counit(F))
                for c in category.objects:
                    self.assertEqual(compose(counit[c], unit[c]), identity_map(restricted[c]), category.name)

    def test_lower_star_triangle_identity(self):
        for category in self.categories:
            triple = AdjointTriple(BaseChange(category))
            for _ in range(INSTANCES):
                F = random_representation(category, self.rng)
                unit = triple.i_star_map(triple.lower_star_unit(F))
                counit = triple.lower_star_counit(triple.i_star(F))
                for c in category.objects:
                    self.assertEqual(compose(counit[c], unit[c]), identity_map(triple.i_star(F)[c]), category.name)

    def test_nakayama_triangle_identities(self):
        for category in self.categories:
            triple = AdjointTriple(BaseChange(category))
            for _ in range(INSTANCES):
                F = random_representation(category, self.rng)
                nu_F = triple.nu_presentation(F)
                unit, _ = triple.unit_lambda(F, nu_F)
                nu_unit = triple.nu_map(unit, source=nu_F)
                counit = triple.counit_sigma(nu_F.module)
                self.assertEqual(compose(counit, nu_unit), identity_map(nu_F.module), category.name)

                G = random_representation(category, self.rng)
                minus = triple.nu_minus_presentation(G)
                unit, _ = triple.unit_lambda(minus.module)
                counit = triple.counit_sigma(G, minus)
                minus_counit = triple.nu_minus_map(counit, target=minus)
                self.assertEqual(compose(minus_counit, unit), identity_map(minus.module), category.name)

    def test_nakayama_on_induced_functors(self):
        for category in self.categories:
            triple = AdjointTriple(BaseChange(category))
            for _ in range(INSTANCES):
                parts = random_parts(category, self.rng)
                self.assertTrue(triple.nu_of_shriek(parts).is_iso(), category.name)
                _, is_iso = triple.unit_lambda(triple.i_shriek(parts))
                self.assertTrue(is_iso, category.name)


class RightDerivedTestCase(TestCase):

    def test_ext_route_matches_coresolution_route(self):
        for name in ("kA2", "square"):
            category = fixture(name, Field(2))
            triple = AdjointTriple(BaseChange(category))
            for G in enumerate_representations(category, 1):
                table = triple.coefficient_ext_table(G, [1, 2], cutoff=6)
                derived = triple.right_derived(G, cutoff=6)
                self.assertEqual(table[1], derived.dims(1), name)
                self.assertEqual(table[2], derived.dims(2), name)


class NakayamaAdjunctionBijectionTestCase(TestCase):

    def setUp(self) -> None:
        self.rng = random.Random(17)
        self.categories = [fixture(name, Field(3)) for name in ("kA2", "loop_x2", "square")]

    def test_hom_spaces_correspond(self):
        for category in self.categories:
            triple = AdjointTriple(BaseChange(category))
            for _ in range(10):
                G = random_representation(category, self.rng)
                F = random_representation(category, self.rng)
                nu_G = triple.nu_presentation(G)
                minus_F = triple.nu_minus_presentation(F)
                there = hom_basis(nu_G.module, F)
                self.assertEqual(len(there), len(hom_basis(G, minus_F.module)), category.name)
                unit, _ = triple.unit_lambda(G, nu_G)
                counit = triple.counit_sigma(F, minus_F)
                for f in there:
                    g = compose(triple.nu_minus_map(f, target=minus_F), unit)
                    self.assertEqual(compose(counit, triple.nu_map(g, source=nu_G)), f, category.name)


class NakayamaOverTensorProductTestCase(TestCase):

    def test_matches_closed_formula_per_base_object(self):
        rng = random.Random(23)
        field = Field(3)
        kA2 = fixture("kA2", field)
        plain = AdjointTriple(BaseChange(kA2))
        for base_name in ("kA2", "loop_x2"):
            change = BaseChange(kA2, fixture(base_name, field))
            triple = AdjointTriple(change)
            for _ in range(10):
                F = random_representation(change.total, rng)
                nu_F = triple.nu(F)
                for b in change.base.objects:
                    self.assertEqual(change.restrict(nu_F, b), plain.nu(change.restrict(F, b)), base_name)
