import xml.etree.ElementTree as ET

from fairpart import Partition, parse_instance
from fairpart.render import render_ascii, render_svg


def test_ascii_plain_and_cut():
    x = parse_instance("RRBB")
    assert render_ascii(x) == "RRBB"
    assert render_ascii(x, Partition(4, (0, 2, 4))) == "RR|BB"


def test_ascii_marks_tied_red_unhappy():
    assert render_ascii(parse_instance("RB"), Partition(2, (0, 2))) == "rB"


def test_ascii_alt5_blocks(alt5):
    assert render_ascii(alt5).split() == [alt5.to_string()]
    blocks = []
    s = alt5.to_string()
    for k in range(0, 30, 5):
        blocks.append(s[k:k + 5])
    assert blocks == ["RRRRR", "BBBBB"] * 3


def test_ascii_uniform_partition_on_alt5(alt5):
    out = render_ascii(alt5, Partition.from_sizes([6] * 5))
    assert out.count("|") == 4
    assert out.replace("|", "").upper() == alt5.to_string()


def test_ascii_circle_offset_places_cuts():
    x = parse_instance("2B 4R 2B")
    out = render_ascii(x, Partition(8, (0, 4, 8), 1))
    # parts (1,5] = BRRR and (5,1] = RBBB; each minority point is unhappy
    assert out == "B|bRRR|rBB"


def test_svg_is_well_formed(alt5):
    svg = render_svg(alt5, Partition.from_sizes([6] * 5), title="a & b")
    root = ET.fromstring(svg)
    tag = lambda el: el.tag.split("}")[-1]
    rects = [el for el in root.iter() if tag(el) == "rect"]
    assert len(rects) == 6
    assert any(tag(el) == "circle" for el in root.iter())
    assert any(tag(el) == "title" and el.text == "a & b" for el in root.iter())


def test_svg_without_partition():
    root = ET.fromstring(render_svg(parse_instance("RRBB")))
    assert root.tag.endswith("svg")
