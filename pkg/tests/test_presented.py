import pytest

from koszulkit.errors import InvalidInputError
from koszulkit.fgmodules import FgModule
from koszulkit.matrices import Matrix
from koszulkit.presented import (
    PresentedMap,
    PresentedModule,
    SesMorphism,
    ThreeByThree,
    cobase_change_check,
    direct_sum_modules,
    is_short_exact,
    nine_term_sequences,
    pullback,
    pushout,
    pushout_of_span,
)
from koszulkit.rings import ZZ


def free(n):
    return PresentedModule.free(ZZ, n)


def cyclic(m):
    return PresentedModule.cyclic(ZZ, m)


def pmap(source, target, rows):
    return PresentedMap(source, target, Matrix(ZZ, rows))


def test_canonical_forms():
    assert cyclic(6).canonical_form() == FgModule(ZZ, 0, (6,))
    assert free(2).canonical_form() == FgModule(ZZ, 2, ())
    assert cyclic(1).is_zero_module()


def test_map_validity():
    doubling = pmap(cyclic(2), cyclic(4), [[2]])
    assert doubling.is_injective()
    assert not doubling.is_surjective()
    with pytest.raises(InvalidInputError):
        pmap(cyclic(2), cyclic(4), [[1]])  # 1*2 = 2 is not a relation in Z/4


def test_kernel_image_cokernel():
    two = pmap(free(1), free(1), [[2]])
    ker, incl = two.kernel()
    assert ker.is_zero_module()
    image, into, onto = two.image()
    assert image.canonical_form() == FgModule(ZZ, 1, ())
    assert into.compose(onto).matrix == two.matrix
    assert two.cokernel_module().canonical_form() == FgModule(ZZ, 0, (2,))

    # projection Z -> Z/3 has kernel 3Z
    proj = pmap(free(1), cyclic(3), [[1]])
    ker, incl = proj.kernel()
    assert ker.canonical_form() == FgModule(ZZ, 1, ())
    assert incl.matrix == Matrix(ZZ, [[3]])


def test_map_equality_mod_relations():
    a = pmap(cyclic(4), cyclic(2), [[1]])
    b = pmap(cyclic(4), cyclic(2), [[3]])
    assert a.equals(b)
    assert not a.is_zero_map()


def test_pushout_identity_leg():
    f = pmap(free(1), free(1), [[2]])
    ident = PresentedMap.identity(free(1))
    obj, leg_f, leg_id = pushout(ident, f)
    # pushout along an identity is the target of the other leg
    assert obj.canonical_form() == FgModule(ZZ, 1, ())
    assert leg_id.compose(f).equals(leg_f.compose(ident))


def test_pushout_of_span_example():
    obj, leg_a, leg_b = pushout_of_span(Matrix(ZZ, [[2]]), Matrix(ZZ, [[3]]))
    assert obj.gens == 2
    assert obj.relations == Matrix(ZZ, [[2], [-3]])
    assert obj.canonical_form() == FgModule(ZZ, 1, ())
    f = pmap(free(1), free(1), [[2]])
    a = pmap(free(1), free(1), [[3]])
    assert leg_a.compose(f).equals(leg_b.compose(a))


def test_pullback():
    # pullback of Z -2-> Z <-3- Z is {(x, y) : 2x = 3y} = Z(3, 2)
    u = pmap(free(1), free(1), [[2]])
    v = pmap(free(1), free(1), [[3]])
    module, incl, leg_a, leg_b = pullback(u, v)
    assert module.canonical_form() == FgModule(ZZ, 1, ())
    assert u.compose(leg_a).equals(v.compose(leg_b))
    column = incl.matrix
    assert abs(column.entries[0][0]) == 3 and abs(column.entries[1][0]) == 2


def test_is_short_exact():
    mono = pmap(free(1), free(1), [[2]])
    epi = pmap(free(1), cyclic(2), [[1]])
    assert is_short_exact(mono, epi)
    not_epi = pmap(free(1), cyclic(4), [[2]])
    assert not is_short_exact(mono, not_epi)


def _split_row(left, right):
    total = direct_sum_modules([left, right])
    ring = ZZ
    mono = PresentedMap(left, total, Matrix(ring, [[1 if i == j else 0 for j in range(left.gens)]
                                                   for i in range(total.gens)]))
    epi = PresentedMap(total, right, Matrix(ring, [[1 if j == left.gens + i else 0 for j in range(total.gens)]
                                                   for i in range(right.gens)]))
    return total, mono, epi


def test_cobase_change_identity_verticals():
    left, right = cyclic(4), cyclic(3)
    total, mono, epi = _split_row(left, right)
    diagram = SesMorphism(mono, epi, mono, epi,
                          PresentedMap.identity(left), PresentedMap.identity(total),
                          PresentedMap.identity(right))
    assert cobase_change_check(diagram) is True


def test_cobase_change_doubling_right_vertical():
    # rows 0 -> Z = Z -> 0 with c = x2: both criterion sides are false, so they agree
    zero = free(0)
    z = free(1)
    mono = PresentedMap.zero(zero, z)
    epi = PresentedMap.identity(z)
    doubling = pmap(z, z, [[2]])
    diagram = SesMorphism(mono, epi, mono, epi,
                          PresentedMap.identity(zero), doubling, doubling)
    assert cobase_change_check(diagram) is True
    assert not doubling.is_iso()


def test_cobase_change_left_vertical_not_iso():
    # top row Z = Z -> 0, bottom row 0 = 0 -> 0: a kills Z but c is an iso
    z = free(1)
    zero = free(0)
    top_mono = PresentedMap.identity(z)
    top_epi = PresentedMap.zero(z, zero)
    bot_mono = PresentedMap.identity(zero)
    bot_epi = PresentedMap.identity(zero)
    a = PresentedMap.zero(z, zero)
    diagram = SesMorphism(top_mono, top_epi, bot_mono, bot_epi,
                          a, a, PresentedMap.identity(zero))
    assert cobase_change_check(diagram) is True
    assert not a.is_injective() or z.is_zero_module()


def test_ses_morphism_validation():
    z = free(1)
    mono = pmap(z, z, [[2]])
    not_epi = pmap(z, cyclic(4), [[2]])
    with pytest.raises(InvalidInputError):
        SesMorphism(mono, not_epi, mono, not_epi,
                    PresentedMap.identity(z), PresentedMap.identity(z),
                    PresentedMap.identity(cyclic(4))).validate()


def test_nine_term_split_grid():
    a, b, c, d = cyclic(2), free(1), cyclic(9), cyclic(4)
    _, ix, px = _split_row(a, b)
    yp, iy_raw, py_raw = _split_row(direct_sum_modules([a, c]), direct_sum_modules([b, d]))
    _, iz, pz = _split_row(c, d)
    # columns are the complementary split inclusions/projections
    y, f_raw, g_raw = _split_row(a, c)
    ypp, fpp, gpp = _split_row(b, d)
    # assemble Yp with layout a, c, b, d from the row construction above:
    # rows use (a+c) then (b+d), columns need a+b and c+d picked out
    na, nb, nc, nd = a.gens, b.gens, c.gens, d.gens
    total = na + nc + nb + nd

    def pick(positions, height):
        return Matrix(ZZ, [[1 if (j < len(positions) and positions[j] == i) else 0
                            for j in range(len(positions))] for i in range(height)])

    def drop(positions, height):
        return Matrix(ZZ, [[1 if i == j else 0 for i in range(height)] for j in positions])

    xp = direct_sum_modules([a, b])
    zp = direct_sum_modules([c, d])
    fp = PresentedMap(xp, yp, pick(list(range(na)) + list(range(na + nc, na + nc + nb)), total))
    gp = PresentedMap(yp, zp, drop(list(range(na, na + nc)) + list(range(na + nc + nb, total)), total))
    grid = ThreeByThree(
        rows=((ix, px), (iy_raw, py_raw), (iz, pz)),
        cols=((f_raw, g_raw), (fp, gp), (fpp, gpp)),
    )
    first, second = nine_term_sequences(grid)
    assert first and second
