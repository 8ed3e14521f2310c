import pytest

from hoare_extract import stlang as st
from hoare_extract.parser import parse_st, parse_type
from hoare_extract.stlang import C, D, Arrow, Prod, Sum


def ty(text):
    return parse_type(text)


def test_star_is_second_projection_of_composition():
    a, b = st.Var("a"), st.Var("b")
    assert st.star(a, b) == st.P1(st.Comp(a, b))


@pytest.mark.parametrize("text,ctx,want", [
    ("skip", {}, "C"),
    ("fun x -> x", {}, None),
    ("(skip & skip)", {}, "C * C"),
    ("(skip * skip)", {}, "C"),
    ("inl(skip)", {"y": D}, None),
    ("elim(v, fun a -> a, fun b -> skip)", {"v": Sum(C, C)}, "C"),
    ("p0(v)", {"v": Prod(D, C)}, "D"),
    ("f x", {"f": Arrow(D, C), "x": D}, "C"),
    ("rec(skip, fun n -> fun y -> y)", {}, "D -> C"),
    ("default[D -> C]", {}, "D -> C"),
])
def test_typing(text, ctx, want, theory):
    th = theory("sort3")
    t = parse_st(text, th)
    if want is None:
        with pytest.raises(st.AmbiguousType):
            st.typecheck(ctx, t, th)
    else:
        assert st.typecheck(ctx, t, th) == ty(want)


def test_expected_type_resolves_ambiguity(theory):
    t = parse_st("fun x -> x", theory("sort3"))
    assert st.typecheck({}, t, None, expected=ty("D -> D")) == ty("D -> D")


@pytest.mark.parametrize("text,ctx", [
    ("skip skip", {}),
    ("p0(skip)", {}),
    ("elim(skip, fun a -> a, fun b -> b)", {}),
    ("f skip", {"f": Arrow(D, C)}),
    ("x", {}),
])
def test_type_errors(text, ctx, theory):
    with pytest.raises(st.StTypeError):
        st.typecheck(ctx, parse_st(text, theory("sort3")), None)


def test_program_constants_have_declared_types(theory):
    th = theory("readwrite")
    assert st.typecheck({}, parse_st("write", th), th) == ty("D -> C")
    assert st.typecheck({}, parse_st("read", th), th) == ty("D * C")
    th3 = theory("sort3")
    assert st.typecheck({}, parse_st("swap[1,2]", th3), th3) == C


def test_condition_and_loop_typing(theory):
    th = theory("insertion_sort")
    loop = parse_st("while {comp(z)}[z](fun n -> fun y -> swap n, fun n -> fun y -> skip, "
                    "fun y -> skip, m)", th)
    assert st.typecheck({"m": D}, loop, th) == ty("C -> C")
    ite = parse_st("if {comp(k)} then skip else swap k", th)
    assert st.typecheck({"k": D}, ite, th) == C
    with pytest.raises(st.StTypeError):
        st.typecheck({"k": Arrow(D, D)}, ite, th)


@pytest.mark.parametrize("src,dst", [
    ("D * C", "D"), ("C * D", "D"), ("C -> D", "D"), ("C * C", "C"),
    ("D -> C", "D -> C"), ("D + C", "D + C"), ("(C -> C) * D", "D"), ("D -> D * C", "D -> D"),
])
def test_unit_simplification_of_types(src, dst):
    assert st.simplify_type(ty(src)) == ty(dst)


def test_unit_simplification_of_terms(theory):
    th = theory("readwrite")
    t = parse_st("fun x -> ((write x * calc) & skip)", th)
    s = st.simplify_units(t, {}, th)
    assert st.show_st(s) == "fun x -> (write x * calc)"
    assert st.typecheck({}, s, th) == ty("D -> C")


def test_alpha_equivalence():
    a = parse_st("fun x -> fun y -> (x & y)")
    b = parse_st("fun u -> fun v -> (u & v)")
    c = parse_st("fun u -> fun v -> (v & u)")
    assert st.alpha_eq_st(a, b)
    assert not st.alpha_eq_st(a, c)


def test_substitution_avoids_capture():
    t = parse_st("fun y -> (x & y)")
    out = st.subst_st(t, "x", st.Var("y"))
    assert st.free_vars_st(out) == {"y"}
    assert st.alpha_eq_st(out, parse_st("fun z -> (y & z)"))


def test_json_round_trip_of_types():
    for text in ("D", "C", "D -> C * D", "(D + C) -> D", "C + (D -> D)"):
        t = ty(text)
        assert st.type_from_json(st.type_to_json(t)) == t
