import os
import random
from unittest import TestCase

from scripts.cmod import (AtLeast, InconclusiveAtCutoffError, ModuleMap, ModuleValidationError, ProjectiveModule,
                          Representation, RightModule, cokernel, compose, direct_sum_modules, dual, ext, ext_modules,
                          hom_basis, hom_complex, hom_map, hom_over_C, identity_map, image, is_projective, kernel,
                          map_between_projectives, pdim, projective_cover, projective_resolution, representable,
                          simple, tensor_map, tensor_over_C, tor_modules)
from scripts.formats import load_category, load_representation
from scripts.gorenstein import random_representation
from scripts.linalg import Field, from_rows

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures")


def fixture(name, field=None):
    return load_category(os.path.join(FIXTURES, name + ".json"), field)


class RepresentationTestCase(TestCase):

    def setUp(self) -> None:
        self.kA2 = fixture("kA2")
        self.loop = fixture("loop_x2")
        self.field = self.kA2.field

    def test_missing_maps_default_to_zero(self):
        M = Representation(self.kA2, {"1": 1, "2": 1})
        self.assertEqual(M.maps["a"].shape, (1, 1))
        self.assertFalse(M.is_zero())

    def test_shape_mismatch(self):
        with self.assertRaises(ModuleValidationError):
            Representation(self.kA2, {"1": 1, "2": 1}, {"a": from_rows([[1, 0]], self.field)})

    def test_relation_must_vanish(self):
        with self.assertRaises(ModuleValidationError):
            Representation(self.loop, {"1": 1}, {"x": from_rows([[1]], self.field)})

    def test_representables(self):
        self.assertEqual(representable(self.kA2, "1").dims, {"1": 1, "2": 1})
        self.assertEqual(representable(self.kA2, "2").dims, {"1": 0, "2": 1})
        self.assertEqual(representable(self.kA2, "2", "right").dims, {"1": 1, "2": 1})
        self.assertEqual(representable(self.loop, "1").dims, {"1": 2})

    def test_dual_is_an_involution(self):
        M = load_representation(os.path.join(FIXTURES, "a2_split_mono.json")).module
        self.assertIsInstance(dual(M), RightModule)
        self.assertEqual(dual(dual(M)), M)

    def test_kernel_cokernel_image(self):
        P1 = representable(self.kA2, "1")
        M = Representation(self.kA2, {"1": 1, "2": 1}, {"a": from_rows([[0]], self.field)})
        cover, epi = projective_cover(M)
        self.assertEqual(cover.summands, ("1", "2"))
        K, inclusion = kernel(epi)
        self.assertEqual(K.dims, {"1": 0, "2": 1})
        self.assertEqual(image(epi)[0].dims, M.dims)
        Q, _ = cokernel(epi)
        self.assertTrue(Q.is_zero())
        self.assertEqual(P1.dims, {"1": 1, "2": 1})
        self.assertTrue(inclusion.is_injective())

    def test_direct_sum(self):
        S1, S2 = simple(self.kA2, "1"), simple(self.kA2, "2")
        total, inclusions, projections = direct_sum_modules([S1, S2])
        self.assertEqual(total.dims, {"1": 1, "2": 1})
        self.assertTrue(compose(projections[0], inclusions[0]).is_iso())
        self.assertTrue(compose(projections[1], inclusions[0]).is_zero())


class ResolutionTestCase(TestCase):

    def setUp(self) -> None:
        self.kA2 = fixture("kA2")
        self.loop = fixture("loop_x2")
        self.lambda1 = fixture("lambda1")

    def test_simple_of_kA2(self):
        resolution = projective_resolution(simple(self.kA2, "1"))
        self.assertEqual(resolution.summands(), [["1"], ["2"]])
        self.assertEqual(resolution.pdim(), 1)
        self.assertTrue(resolution.completed)

    def test_projective(self):
        self.assertEqual(pdim(representable(self.kA2, "1")), 0)
        self.assertTrue(is_projective(representable(self.loop, "1")))
        self.assertFalse(is_projective(simple(self.loop, "1")))

    def test_unfinished_resolution(self):
        value = pdim(simple(self.loop, "1"), cutoff=4)
        self.assertEqual(value, AtLeast(4))
        self.assertEqual(str(value), "≥4")
        self.assertIsInstance(pdim(simple(self.lambda1, "2"), cutoff=3), AtLeast)

    def test_syzygies_are_kernels(self):
        resolution = projective_resolution(simple(self.loop, "1"), cutoff=3)
        self.assertEqual([K.dims for K in resolution.syzygies], [{"1": 1}] * 4)
        for d_in, d_out in zip(resolution.differentials[1:], resolution.differentials):
            self.assertTrue(compose(d_out, d_in).is_zero())


class HomTensorTestCase(TestCase):

    def setUp(self) -> None:
        self.square = fixture("square")
        self.rng = random.Random(7)

    def test_yoneda(self):
        M = random_representation(self.square, self.rng)
        for x in self.square.objects:
            self.assertEqual(hom_over_C(representable(self.square, x), M).dims, {"*": M.dims[x]})
            self.assertEqual(len(hom_basis(representable(self.square, x), M)), M.dims[x])

    def test_tensor_with_representable(self):
        M = random_representation(self.square, self.rng)
        for x in self.square.objects:
            self.assertEqual(tensor_over_C(representable(self.square, x, "right"), M).dims, {"*": M.dims[x]})

    def test_hom_basis_maps_are_natural(self):
        M = random_representation(self.square, self.rng)
        N = random_representation(self.square, self.rng)
        for f in hom_basis(M, N):
            self.assertEqual(ModuleMap(M, N, f.matrices).failing_arrows(), [])

    def composable_pairs(self, M, N, L):
        pairs = [(f, g) for f in hom_basis(M, N) for g in hom_basis(N, L)]
        _, epi = projective_cover(M)
        _, inclusion = kernel(epi)
        return pairs + [(inclusion, epi)]

    def test_tensor_is_functorial(self):
        for _ in range(5):
            R = RightModule.from_left(random_representation(self.square.opposite(), self.rng))
            M, N, L = (random_representation(self.square, self.rng) for _ in range(3))
            self.assertEqual(tensor_map(R, identity_map(M)), identity_map(tensor_over_C(R, M)))
            for f, g in self.composable_pairs(M, N, L):
                self.assertEqual(tensor_map(R, compose(g, f)), compose(tensor_map(R, g), tensor_map(R, f)))

    def test_hom_is_functorial(self):
        for _ in range(5):
            K, M, N, L = (random_representation(self.square, self.rng) for _ in range(4))
            self.assertEqual(hom_map(K, identity_map(M)), identity_map(hom_over_C(K, M)))
            for f, g in self.composable_pairs(M, N, L):
                self.assertEqual(hom_map(K, compose(g, f)), compose(hom_map(K, g), hom_map(K, f)))

    def test_hom_complex_keeps_window_order(self):
        kA2 = fixture("kA2")
        P, Q, R = (ProjectiveModule(kA2, summands) for summands in (["2"], ["1"], ["1", "2"]))
        G = Representation(kA2, {"1": 1, "2": 2}, {"a": from_rows([[1], [0]], kA2.field)})
        first, second = hom_complex([map_between_projectives(P, Q, {}), map_between_projectives(Q, R, {})], G)
        self.assertEqual((first.source.dims, first.target.dims), ({"*": 1}, {"*": 2}))
        self.assertEqual((second.source.dims, second.target.dims), ({"*": 3}, {"*": 1}))


class DerivedFunctorTestCase(TestCase):

    def setUp(self) -> None:
        self.kA2 = fixture("kA2")
        self.loop = fixture("loop_x2")

    def test_ext_between_simples(self):
        S1, S2 = simple(self.kA2, "1"), simple(self.kA2, "2")
        self.assertEqual(ext(S1, S2, 0).dims, {"*": 0})
        self.assertEqual(ext(S1, S2, 1).dims, {"*": 1})
        self.assertEqual(ext(S2, S1, 1).dims, {"*": 0})
        self.assertEqual(ext(S1, S2, 5).dims, {"*": 0})

    def test_ext_inconclusive_beyond_cutoff(self):
        S = simple(self.loop, "1")
        table = ext_modules(S, S, cutoff=3)
        self.assertEqual(table.dims(1), {"*": 1})
        with self.assertRaises(InconclusiveAtCutoffError):
            table.dims(3)

    def test_tor_independent_of_padding(self):
        kA3 = fixture("kA3", Field(5))
        rng = random.Random(2024)
        for _ in range(20):
            M = RightModule.from_left(random_representation(kA3.opposite(), rng))
            F = random_representation(kA3, rng)
            padding = rng.choice(kA3.objects)
            minimal = tor_modules(M, F, cutoff=6)
            padded = tor_modules(M, F, cutoff=6, padding=padding)
            for i in range(5):
                self.assertEqual(minimal.dims(i), padded.dims(i))
