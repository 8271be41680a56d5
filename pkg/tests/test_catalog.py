import json

import pytest
from hypothesis import given, settings, strategies as st

from extcoh.catalog import FORMAT, catalog, find_instance, fixtures, instance_from_doc, instance_to_doc, zoo
from extcoh.cli import instance_digest
from extcoh.errors import NotAHomomorphism, NotClosed, ValidationError


def test_sizes():
    assert len(fixtures()) == 12
    assert len(catalog()) == 680
    names = [i.name for i in catalog()]
    assert len(set(names)) == len(names)


def test_zoo_instances_validate():
    for inst in zoo():
        kappa = inst.kappa()
        assert kappa.fgamma.group.order == inst.F.order * inst.Gamma.order


def test_find_instance():
    assert find_instance("z12").G.order == 6
    with pytest.raises(KeyError):
        find_instance("no-such-instance")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(catalog()))
def test_document_round_trip(inst):
    doc = instance_to_doc(inst)
    assert doc["format"] == FORMAT
    back = instance_from_doc(json.loads(json.dumps(doc)))
    assert instance_digest(back) == instance_digest(inst)
    assert back.kappa().kappa_bar == inst.kappa().kappa_bar


def test_bad_documents():
    doc = instance_to_doc(find_instance("d4"))
    broken = json.loads(json.dumps(doc))
    broken["groups"]["G"][1][1] = 7
    with pytest.raises(NotClosed):
        instance_from_doc(broken)
    broken = json.loads(json.dumps(doc))
    broken["kernels"]["kappa"]["lift"][1] = [0, 2, 1, 3]  # not an automorphism of Z4
    with pytest.raises(ValidationError):
        instance_from_doc(broken)
    broken = json.loads(json.dumps(doc))
    del broken["kernels"]
    with pytest.raises(ValidationError):
        instance_from_doc(broken)


def test_bad_gamma_action_in_document():
    doc = json.loads(json.dumps(instance_to_doc(find_instance("z3-inversion-gamma"))))
    doc["actions"]["G"][1] = [0, 1, 1]
    with pytest.raises(ValidationError):
        instance_from_doc(doc)
    assert issubclass(NotAHomomorphism, ValidationError)
