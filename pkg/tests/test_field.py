import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decbrw import field as fa
from decbrw.errors import AccumulationOverflow, BoundViolation, OverlongInput
from decbrw.field import Bound, FieldElement

from conftest import CONFIGS


def partial_element(rng: random.Random, cfg: fa.PrimeConfig, top: bool = False) -> FieldElement:
    caps = cfg.partial_caps
    limbs = tuple((1 << c) - 1 if top else rng.getrandbits(c) for c in caps)
    return FieldElement(limbs, Bound.PARTIAL)


def value(e, cfg):
    return fa.fe_value(e, cfg)


@st.composite
def partial_elements(draw, cfg):
    limbs = tuple(draw(st.integers(0, (1 << c) - 1)) for c in cfg.partial_caps)
    return FieldElement(limbs, Bound.PARTIAL)


class TestConversion:
    def test_zero_bytes(self):
        assert fa.fe_from_le_bytes(bytes(16), fa.P1305).limbs == (0, 0, 0, 0, 0)

    def test_positional_split(self):
        e = fa.fe_from_le_bytes((1 << 26).to_bytes(16, "little"), fa.P1305)
        assert e.limbs == (0, 1, 0, 0, 0)

    def test_near_modulus(self):
        e = fa.fe_from_le_bytes((2 ** 130 - 4).to_bytes(17, "little"), fa.P1305)
        assert fa.fe_to_int(fa.full_reduce(e, fa.P1305), fa.P1305) == 1

    @pytest.mark.parametrize("name", ["P1305", "P1271", "P1271_4L"])
    def test_overlong(self, name):
        cfg = CONFIGS[name]
        with pytest.raises(OverlongInput):
            fa.fe_from_le_bytes(bytes(cfg.max_input_bytes + 1), cfg)
        with pytest.raises(OverlongInput):
            fa.fe_from_le_bytes((1 << cfg.m).to_bytes(cfg.max_input_bytes, "little"), cfg)

    def test_round_trip(self, cfg):
        rng = random.Random(1)
        for _ in range(200):
            x = rng.getrandbits(cfg.m - 1)
            assert fa.fe_to_int(fa.fe_from_int(x, cfg), cfg) == x

    def test_bound_classification(self):
        cfg = fa.P1305
        assert fa.fe_from_int(cfg.p - 1, cfg).bound is Bound.CANONICAL
        assert fa.fe_from_int(cfg.p, cfg).bound is Bound.PARTIAL


class TestMultiplication:
    def test_identity(self, cfg):
        x = fa.fe_from_int(123456789123456789, cfg)
        h = fa.unreduced_mult(fa.fe_from_int(1, cfg), x, cfg)
        assert h.bound is Bound.UNREDUCED
        assert value(h, cfg) == 123456789123456789

    def test_two_to_64_squared(self):
        cfg = fa.P1305
        e = fa.fe_from_int(2 ** 64 % cfg.p, cfg)
        assert value(fa.unreduced_mult(e, e, cfg), cfg) == 2 ** 128 % cfg.p

    @pytest.mark.parametrize("name", ["P1305", "P1271", "P1271_4L"])
    def test_homomorphism_fuzz(self, name):
        # 10^4 random pairs per prime and representation
        cfg = CONFIGS[name]
        rng = random.Random(name)
        for _ in range(10_000):
            e, f = partial_element(rng, cfg), partial_element(rng, cfg)
            r = fa.partial_reduce(fa.unreduced_mult(e, f, cfg), cfg)
            assert value(r, cfg) == value(e, cfg) * value(f, cfg) % cfg.p

    def test_tilde_bit_identical(self, cfg):
        rng = random.Random(7)
        for _ in range(2000):
            e, f = partial_element(rng, cfg), partial_element(rng, cfg)
            et = fa.precompute_tilde(e, cfg)
            assert fa.unreduced_mult_tilde(e, et, f, cfg) == fa.unreduced_mult(e, f, cfg)

    def test_tilde_zero_and_one(self, cfg):
        f = fa.fe_from_int(987654321, cfg)
        for k, want in ((0, 0), (1, 987654321)):
            e = fa.fe_from_int(k, cfg)
            assert value(fa.unreduced_mult_tilde(e, fa.precompute_tilde(e, cfg), f, cfg), cfg) == want

    def test_precompute_tilde_examples(self):
        e = FieldElement((0, 1, 1, 1, 1), Bound.CANONICAL)
        assert fa.precompute_tilde(e, fa.P1305).limbs == (5, 5, 5, 5)
        assert fa.precompute_tilde(e, fa.P1271).limbs == (8, 8, 8, 8)
        assert fa.precompute_tilde(fa.fe_zero(fa.P1305), fa.P1305).limbs == (0, 0, 0, 0)

    def test_unreduced_operand_rejected(self, cfg):
        h = fa.unreduced_mult(fa.fe_from_int(5, cfg), fa.fe_from_int(7, cfg), cfg)
        with pytest.raises(BoundViolation):
            fa.unreduced_mult(h, h, cfg)

    def test_loose_operands_accepted_on_five_limbs(self):
        rng = random.Random(3)
        for cfg in (fa.P1305, fa.P1271):
            for _ in range(500):
                a = fa.unreduced_add(partial_element(rng, cfg, top=True), partial_element(rng, cfg))
                b = fa.unreduced_add(partial_element(rng, cfg), partial_element(rng, cfg, top=True))
                assert a.bound is Bound.LOOSE
                r = fa.partial_reduce(fa.unreduced_mult(a, b, cfg), cfg)
                assert value(r, cfg) == value(a, cfg) * value(b, cfg) % cfg.p

    def test_loose_operands_carried_on_four_limbs(self):
        cfg = fa.P1271_4L
        top = partial_element(random.Random(0), cfg, top=True)
        a = fa.unreduced_add(top, top)
        with pytest.raises(BoundViolation):
            fa.unreduced_mult(a, a, cfg)
        r = fa.fe_mult(a, a, cfg)
        assert value(r, cfg) == value(a, cfg) ** 2 % cfg.p

    def test_fe_mult_ladder(self, cfg):
        rng = random.Random(11)
        tau_int = rng.getrandbits(cfg.k)
        e = fa.fe_from_int(tau_int, cfg)
        for j in range(1, 12):
            e = fa.fe_square(e, cfg)
            assert value(e, cfg) == pow(tau_int, 2 ** j, cfg.p)
        one = fa.fe_from_int(1, cfg)
        assert value(fa.fe_mult(one, one, cfg), cfg) == 1


class TestReduction:
    def test_canonical_unchanged(self, cfg):
        x = fa.fe_from_int(cfg.p - 17, cfg)
        r = fa.partial_reduce(x, cfg)
        assert r.bound is Bound.PARTIAL and value(r, cfg) == cfg.p - 17

    def test_adversarial_max_limbs(self, cfg):
        x = FieldElement((2 ** 63 - 1,) * cfg.limb_count, Bound.UNREDUCED)
        r = fa.partial_reduce(x, cfg)
        assert value(r, cfg) == value(x, cfg)
        assert all(v >> c == 0 for v, c in zip(r.limbs, cfg.partial_caps))

    def test_limbs_of_p(self, cfg):
        x = fa.fe_from_int(cfg.p, cfg)
        assert value(fa.partial_reduce(x, cfg), cfg) == 0
        assert fa.full_reduce(x, cfg).limbs == fa.fe_zero(cfg).limbs

    def test_full_reduce_examples(self, cfg):
        assert fa.fe_to_int(fa.full_reduce(fa.fe_from_int(cfg.p, cfg), cfg), cfg) == 0
        assert fa.fe_to_int(fa.full_reduce(fa.fe_from_int(cfg.p + 3, cfg), cfg), cfg) == 3

    def test_full_reduce_fuzz(self, cfg):
        rng = random.Random(5)
        for _ in range(1000):
            x = FieldElement(tuple(rng.getrandbits(62) for _ in range(cfg.limb_count)), Bound.UNREDUCED)
            r = fa.full_reduce(x, cfg)
            assert r.bound is Bound.CANONICAL
            assert fa.fe_to_int(r, cfg) == value(x, cfg)
            assert fa.full_reduce(r, cfg) == r

    def test_full_reduce_boundaries(self, cfg):
        for v in (cfg.p - 1, cfg.p, cfg.p + 1, 2 ** cfg.m - 1, 2 ** cfg.m, 2 * cfg.p - 1):
            if v >> (cfg.limb_count * cfg.limb_bits):
                continue
            assert fa.fe_to_int(fa.full_reduce(fa.fe_from_int(v, cfg), cfg), cfg) == v % cfg.p

    def test_partial_reduce_rejects_wide_input(self, cfg):
        with pytest.raises(BoundViolation):
            fa.partial_reduce(FieldElement((1 << 63,) + (0,) * (cfg.limb_count - 1), Bound.UNREDUCED), cfg)


class TestAddition:
    def test_add_zero(self, cfg):
        a = fa.fe_from_int(424242, cfg)
        assert value(fa.unreduced_add(a, fa.fe_zero(cfg)), cfg) == 424242

    def test_64_summands(self):
        cfg = fa.P1305
        x = FieldElement(((1 << 57) - 1,) * 5, Bound.UNREDUCED)
        acc = x
        for _ in range(63):
            acc = fa.unreduced_add(acc, x)
        assert max(acc.limbs) < 2 ** 63

    def test_overflow_detected(self, cfg):
        x = FieldElement(((1 << 63),) * cfg.limb_count, Bound.UNREDUCED)
        with pytest.raises(AccumulationOverflow):
            fa.unreduced_add(x, x)

    def test_random_pairs(self, cfg):
        rng = random.Random(9)
        for _ in range(500):
            a, b = partial_element(rng, cfg), partial_element(rng, cfg)
            assert value(fa.unreduced_add(a, b), cfg) == (value(a, cfg) + value(b, cfg)) % cfg.p


class TestDigest:
    def test_zero(self):
        assert fa.digest_mod_2mu(fa.fe_zero(fa.P1305), fa.P1305) == bytes(16)

    def test_truncation(self):
        cfg = fa.P1305
        assert fa.digest_mod_2mu(fa.fe_from_int(2 ** 129, cfg), cfg) == bytes(16)

    def test_random(self, cfg):
        rng = random.Random(2)
        for _ in range(200):
            x = rng.randrange(cfg.p)
            d = fa.digest_mod_2mu(fa.fe_from_int(x, cfg), cfg)
            assert int.from_bytes(d, "little") == x % 2 ** cfg.mu

    def test_requires_canonical(self):
        cfg = fa.P1305
        with pytest.raises(BoundViolation):
            fa.digest_mod_2mu(FieldElement((1, 0, 0, 0, 0), Bound.PARTIAL), cfg)


@pytest.mark.parametrize("name", ["P1305", "P1271", "P1271_4L"])
@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_property_mult_and_reduce(name, data):
    cfg = CONFIGS[name]
    e = data.draw(partial_elements(cfg))
    f = data.draw(partial_elements(cfg))
    h = fa.unreduced_mult(e, f, cfg)
    r = fa.partial_reduce(h, cfg)
    want = value(e, cfg) * value(f, cfg) % cfg.p
    assert value(r, cfg) == want
    assert all(v >> c == 0 for v, c in zip(r.limbs, cfg.partial_caps))
    full = fa.full_reduce(r, cfg)
    assert fa.fe_to_int(full, cfg) == want
    assert fa.full_reduce(full, cfg) == full
    assert fa.partial_reduce(full, cfg).limbs == full.limbs


@pytest.mark.parametrize("name", ["P1305", "P1271", "P1271_4L"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_property_64_fold_accumulation(name, data):
    cfg = CONFIGS[name]
    acc = None
    want = 0
    for _ in range(64):
        e = data.draw(partial_elements(cfg))
        f = FieldElement(tuple((1 << c) - 1 for c in cfg.partial_caps), Bound.PARTIAL)
        h = fa.unreduced_mult(e, f, cfg)
        want = (want + value(e, cfg) * value(f, cfg)) % cfg.p
        acc = h if acc is None else fa.unreduced_add(acc, h)
    assert max(acc.limbs) < 2 ** 63
    assert value(fa.partial_reduce(acc, cfg), cfg) == want
