"""Tokenizer, parser, hydrogen assignment, validity and writer tests."""

import random

import pytest
from hypothesis import given, strategies as st

from helpers import graph_isomorphic, relabel
from molshift.smiles import (
    BondOrder,
    DanglingBond,
    EmptyInput,
    FailureReason,
    RingBondConflict,
    SmilesError,
    TokenKind,
    UnbalancedBranch,
    UnclosedRingBond,
    UnknownCharacter,
    UnsupportedElement,
    is_valid,
    parse_smiles,
    read_smiles,
    tokenize,
    validate,
    write,
)

# A small cross-section of the supported dialect, used for roundtrips.
MOLECULES = [
    "C",
    "CC",
    "CCO",
    "C=C",
    "C#N",
    "O=C=O",
    "CC(=O)O",
    "CC(=O)[O-]",
    "[NH4+]",
    "C1CCCCC1",
    "c1ccccc1",
    "c1ccncc1",
    "c1cc[nH]c1",
    "c1ccoc1",
    "c1ccsc1",
    "c1ccc2ccccc2c1",
    "c1ccc(-c2ccccc2)cc1",
    "CC(C)(C)c1ccccc1",
    "CCN(CC)CC",
    "CC(=O)OCC",
    "ClCCl",
    "FC(F)(F)c1ccccc1",
    "BrCCBr",
    "ICI",
    "CS(=O)(=O)O",
    "CP(C)C",
    "O=[N+]([O-])c1ccccc1",
    "C1CC2CCC1CC2",
    "C1CCCCCCCCCCC1",
    "[13CH4]",
    "C%12CCCCC%12",
    "CCO.CC",
    "C/C=C/C",
    "N[C@H](C)C(=O)O",
    "c1ccc(O)cc1",
    "Cc1ccc(N)cc1",
    "OCC(O)CO",
    "C1OC1",
    "C1NC1",
    "S=C=S",
]


class TestTokenize:
    def test_benzene_is_one_token_per_character(self):
        tokens = tokenize("c1ccccc1")
        assert [t.text for t in tokens] == ["c", "1", "c", "c", "c", "c", "c", "1"]
        assert len(tokens) == 8

    def test_bracket_atom_is_one_token(self):
        tokens = tokenize("CC(=O)[O-]")
        assert [t.text for t in tokens] == ["C", "C", "(", "=", "O", ")", "[O-]"]
        assert tokens[-1].kind is TokenKind.BRACKET_ATOM

    def test_two_letter_element_stays_whole(self):
        tokens = tokenize("CCl")
        assert [t.text for t in tokens] == ["C", "Cl"]
        assert all(t.kind is TokenKind.ATOM for t in tokens)

    def test_percent_ring_closure(self):
        tokens = tokenize("C%12CCCCC%12")
        texts = [t.text for t in tokens]
        assert texts == ["C", "%12", "C", "C", "C", "C", "C", "%12"]
        assert tokens[1].kind is TokenKind.RING_CLOSURE

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            tokenize("")

    def test_unknown_character_reports_position(self):
        with pytest.raises(UnknownCharacter) as exc:
            tokenize("C$C")
        assert exc.value.position == 1

    @pytest.mark.parametrize("smiles", MOLECULES)
    def test_partition_on_corpus(self, smiles):
        tokens = tokenize(smiles)
        assert "".join(t.text for t in tokens) == smiles
        positions = [t.pos for t in tokens]
        assert positions == sorted(positions)

    @given(st.text(alphabet="CNOSPcnos123()[]=#+-%@/\\.BrClI", max_size=30))
    def test_partition_property(self, text):
        try:
            tokens = tokenize(text)
        except SmilesError:
            return
        assert "".join(t.text for t in tokens) == text


class TestParse:
    def test_benzene(self):
        g = parse_smiles("c1ccccc1")
        assert len(g.atoms) == 6
        assert len(g.bonds) == 6
        assert all(b.order is BondOrder.AROMATIC for b in g.bonds)
        assert all(a.aromatic for a in g.atoms)
        assert sum(g.ring_bond_flags) == 6

    def test_unclosed_ring(self):
        with pytest.raises(UnclosedRingBond) as exc:
            parse_smiles("C1CC")
        assert exc.value.label == 1

    def test_unbalanced_branch(self):
        with pytest.raises(UnbalancedBranch):
            parse_smiles("C(C")
        with pytest.raises(UnbalancedBranch):
            parse_smiles("CC)C")

    def test_dangling_bond(self):
        with pytest.raises(DanglingBond):
            parse_smiles("CC=")
        with pytest.raises(DanglingBond):
            parse_smiles("=CC")

    def test_unsupported_element(self):
        with pytest.raises(UnsupportedElement):
            parse_smiles("[Fe]")

    def test_ring_bond_conflicts(self):
        with pytest.raises(RingBondConflict):
            parse_smiles("C11")  # self loop
        with pytest.raises(RingBondConflict):
            parse_smiles("C=1CCCCC#1")  # contradictory closure orders

    def test_ring_closure_order_may_sit_on_either_end(self):
        for s in ("C=1CCCCC1", "C1CCCCC=1", "C=1CCCCC=1"):
            g = parse_smiles(s)
            orders = sorted(b.order.name for b in g.bonds)
            assert orders.count("DOUBLE") == 1

    def test_components_via_dot(self):
        g = parse_smiles("CCO.CC")
        assert g.n_components == 2
        assert g.component == (0, 0, 0, 1, 1)

    def test_branch_nesting(self):
        g = parse_smiles("CC(C(C)C)C")
        assert len(g.atoms) == 6
        degrees = sorted(g.degree(i) for i in range(6))
        assert degrees == [1, 1, 1, 1, 3, 3]

    def test_stereo_markers_dropped(self):
        g = parse_smiles("C/C=C/C")
        assert len(g.atoms) == 4
        orders = [b.order for b in g.bonds]
        assert orders.count(BondOrder.DOUBLE) == 1
        assert orders.count(BondOrder.SINGLE) == 2
        g2 = parse_smiles("N[C@H](C)C(=O)O")
        assert len(g2.atoms) == 6

    def test_biphenyl_link_is_single_even_when_implied(self):
        for s in ("c1ccc(-c2ccccc2)cc1", "c1ccc(c2ccccc2)cc1"):
            g = parse_smiles(s)
            singles = [b for b in g.bonds if b.order is BondOrder.SINGLE]
            assert len(singles) == 1
            a, b = singles[0].a, singles[0].b
            assert g.atoms[a].aromatic and g.atoms[b].aromatic


class TestImplicitHydrogens:
    def test_methane(self):
        g = read_smiles("C")
        assert g.total_h(0) == 4

    def test_water(self):
        g = read_smiles("O")
        assert g.total_h(0) == 2

    def test_ammonium_is_explicit(self):
        g = read_smiles("[NH4+]")
        assert g.atoms[0].explicit_h == 4
        assert g.atoms[0].formal_charge == 1
        assert g.implicit_h[0] == 0
        assert g.total_h(0) == 4

    @pytest.mark.parametrize(
        "smiles,expected",
        [
            ("c1ccccc1", [1] * 6),          # benzene CH x6
            ("c1ccncc1", [1, 1, 1, 0, 1, 1]),  # pyridine N bare
            ("c1cc[nH]c1", [1, 1, 1, 1, 1]),   # pyrrole NH
            ("c1ccoc1", [1, 1, 1, 0, 1]),      # furan O bare
            ("CC(=O)O", [3, 0, 0, 1]),
            ("N#N", [0, 0]),
            ("CS(=O)(=O)O", [3, 0, 0, 0, 1]),  # hypervalent S
        ],
    )
    def test_counts(self, smiles, expected):
        g = read_smiles(smiles)
        assert [g.total_h(i) for i in range(len(g.atoms))] == expected


class TestValidate:
    def test_benzene_valid(self):
        assert validate(read_smiles("c1ccccc1")).valid

    def test_pentavalent_carbon(self):
        report = validate(read_smiles("C(C)(C)(C)(C)C"))
        assert not report.valid
        reasons = {f.reason for f in report.failures}
        assert reasons == {FailureReason.OVER_VALENCE}
        assert any(f.where == 0 for f in report.failures)

    def test_charged_nitrogen_valence_shift(self):
        assert validate(read_smiles("[NH4+]")).valid
        assert not validate(read_smiles("[NH5]")).valid

    def test_aromatic_bond_off_ring_rejected(self):
        report = validate(read_smiles("c1ccccc1:c1ccccc1"))
        assert not report.valid
        assert FailureReason.AROMATIC_BOND_NOT_IN_RING in {
            f.reason for f in report.failures
        }

    def test_failure_report_is_data_not_exception(self):
        report = validate(read_smiles("C(C)(C)(C)(C)C"))
        assert report.valid == (len(report.failures) == 0)

    @pytest.mark.parametrize("smiles", MOLECULES)
    def test_corpus_is_valid(self, smiles):
        assert is_valid(smiles), smiles

    @pytest.mark.parametrize("smiles", MOLECULES)
    def test_validity_is_permutation_invariant(self, smiles):
        g = read_smiles(smiles)
        rng = random.Random(hash(smiles) & 0xFFFF)
        perm = list(range(len(g.atoms)))
        rng.shuffle(perm)
        shuffled = relabel(g, perm)
        assert validate(shuffled).valid == validate(g).valid


class TestWrite:
    def test_single_carbon(self):
        assert write(read_smiles("C")) == "C"

    def test_same_graph_same_text(self):
        assert write(read_smiles("OCC")) == write(read_smiles("CCO"))

    def test_benzene_roundtrip(self):
        g = read_smiles("c1ccccc1")
        out = write(g)
        g2 = read_smiles(out)
        assert graph_isomorphic(g, g2)
        assert len(g2.atoms) == 6 and all(a.aromatic for a in g2.atoms)

    @pytest.mark.parametrize("smiles", MOLECULES)
    def test_roundtrip_isomorphic(self, smiles):
        g = read_smiles(smiles)
        out = write(g)
        g2 = read_smiles(out)
        assert graph_isomorphic(g, g2), (smiles, out)
        # writing again is a fixed point
        assert write(g2) == out

    @pytest.mark.parametrize("smiles", MOLECULES)
    def test_output_is_permutation_invariant(self, smiles):
        g = read_smiles(smiles)
        rng = random.Random(0)
        for _ in range(3):
            perm = list(range(len(g.atoms)))
            rng.shuffle(perm)
            assert write(relabel(g, perm)) == write(g)

    def test_ring_digits_reused(self):
        # long fused chain needs digit reuse, not digit exhaustion
        s = "C1CC1" + "".join("C1CC1" for _ in range(12))
        g = read_smiles(s.replace("", ""))
        out = write(g)
        assert "%" not in out
        assert graph_isomorphic(g, read_smiles(out))


ADVERSARIAL_BASES = ["CCO", "c1ccccc1", "CC(=O)O", "C1CCCCC1", "CC(C)C"]


def _adversarial_corpus():
    rng = random.Random(20240817)
    cases = []
    for base in ADVERSARIAL_BASES:
        for _ in range(4):
            pos = rng.randrange(len(base) + 1)
            cases.append((base[:pos] + "(" + base[pos:], UnbalancedBranch))
        # an unused ring digit after an atom never closes
        cases.append((base + "7", UnclosedRingBond))
        cases.append(("C7" + base, UnclosedRingBond))
    return cases


@pytest.mark.parametrize("text,error", _adversarial_corpus())
def test_adversarial_strings_rejected(text, error):
    with pytest.raises((UnbalancedBranch, UnclosedRingBond, DanglingBond)):
        parse_smiles(text)
    with pytest.raises(SmilesError):
        parse_smiles(text)


@pytest.mark.parametrize("smiles", ADVERSARIAL_BASES)
def test_adversarial_bases_parse(smiles):
    parse_smiles(smiles)
