import json

import pytest

from rrzero.groups import Extension, FGAbelianGroup, IncreasingUnion, Semidirect
from rrzero.io import DescriptionFileError, load_document, parse_description
from rrzero.obstruction import derive_tags


def test_dinf_file(data_dir):
    p = parse_description(data_dir / "dinf.grp")
    assert isinstance(p.group, Semidirect)
    g = p.group.group
    assert g.rank == 1 and g.acting.order == 2 and g.action[1] == ((-1,),)
    assert p.operations == ["analyze", "embed-audit", "hirsch"]


def test_lamplighter_file(data_dir):
    p = parse_description(data_dir / "lamplighter.grp")
    assert isinstance(p.group, Extension) and isinstance(p.group.normal, IncreasingUnion)
    assert p.group.quotient.group == FGAbelianGroup(1)
    assert p.node_ids == {"lamplighter": "root", "lamps": "root.normal"}


def test_malformed_divisibility_chain(data_dir):
    with pytest.raises(DescriptionFileError, match="divisibility"):
        parse_description(data_dir / "bad_divisibility.grp")


def test_unknown_fields_are_rejected():
    with pytest.raises(DescriptionFileError) as err:
        load_document({"version": 1, "group": {"kind": "abelian", "free_rank": 1, "colour": "red"}})
    assert err.value.location.startswith("/group")


def test_version_is_pinned():
    with pytest.raises(DescriptionFileError):
        load_document({"version": 2, "group": {"kind": "abelian", "free_rank": 1}})


def test_syntax_errors_report_lines(tmp_path):
    f = tmp_path / "x.grp"
    f.write_text('{\n  "version": 1,\n  "group": {\n}}}\n')
    with pytest.raises(DescriptionFileError, match="line"):
        parse_description(f)


def test_schema_errors_report_lines(tmp_path):
    f = tmp_path / "x.grp"
    f.write_text('{\n  "version": 1,\n  "group": {\n    "kind": "abelian",\n    "free_rank": -1\n  }\n}\n')
    with pytest.raises(DescriptionFileError, match="line"):
        parse_description(f)


def test_declarations_carry_declared_provenance():
    doc = {
        "version": 1,
        "group": {"kind": "declared", "id": "H", "name": "H"},
        "declarations": [{"node": "H", "flag": "amenable", "value": True, "justification": "given"}],
    }
    p = load_document(doc)
    assert derive_tags(p.group).provenance[("root", "amenable")] == "declared"


def test_declarations_must_name_known_nodes():
    doc = {
        "version": 1,
        "group": {"kind": "declared", "name": "H"},
        "declarations": [{"node": "K", "flag": "amenable", "value": True, "justification": "given"}],
    }
    with pytest.raises(DescriptionFileError, match="no node"):
        load_document(doc)


def test_generator_matrices_need_abelian_acting_spec():
    doc = {
        "version": 1,
        "group": {"kind": "semidirect", "rank": 1, "acting": {"table": [[0, 1], [1, 0]]}, "generator_matrices": [[[-1]]]},
    }
    with pytest.raises(DescriptionFileError):
        load_document(doc)
    doc["group"] = {"kind": "semidirect", "rank": 1, "acting": {"table": [[0, 1], [1, 0]]}, "action": [[[1]], [[-1]]]}
    assert isinstance(load_document(doc).group, Semidirect)


@pytest.mark.parametrize("name", ["dinf", "z2_minus_identity", "zn", "z_powers_diagonal", "z2_z4_diagonal", "rationals", "lamplighter", "unitriangular", "direct_sum_z2", "dinf_tower", "series"])
def test_sample_files_parse(data_dir, name):
    parse_description(data_dir / f"{name}.grp")
    json.loads((data_dir / f"{name}.grp").read_text())
