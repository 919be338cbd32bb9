#!/usr/bin/env python3
"""Regenerates expected.html for every conformance case with libxslt (lxml).

Each case directory holds input.xml and sheet.xsl. The transform runs in
libxslt; the result tree is then written with the same serialization
conventions as the gridmap engine (text escapes & < >, attributes also escape
", empty void elements as <br/>, other empty elements as <x></x>), so the
comparison in xslt_test only has to normalize whitespace.

Usage: python3 generate_expected.py [cases-dir]
"""

import pathlib
import sys

from lxml import etree

VOID = {"area", "base", "br", "col", "embed", "hr", "img", "input", "link",
        "meta", "param", "source", "track", "wbr"}


def esc_text(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def esc_attr(s):
    return esc_text(s).replace('"', "&quot;")


def write(el, out):
    out.append("<" + el.tag)
    for k, v in el.attrib.items():
        out.append(' %s="%s"' % (k, esc_attr(v)))
    if el.tag in VOID and not el.text and len(el) == 0:
        out.append("/>")
    else:
        out.append(">")
        if el.text:
            out.append(esc_text(el.text))
        for child in el:
            write(child, out)
        out.append("</%s>" % el.tag)
    if el.tail:
        out.append(esc_text(el.tail))


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent / "cases")
    for case in sorted(p for p in root.iterdir() if p.is_dir()):
        transform = etree.XSLT(etree.parse(str(case / "sheet.xsl")))
        result = transform(etree.parse(str(case / "input.xml")))
        top = result.getroot()
        if top is None or top.getprevious() is not None or top.getnext() is not None:
            raise SystemExit("%s: result must have exactly one top-level element" % case.name)
        out = []
        write(top, out)
        (case / "expected.html").write_text("".join(out) + "\n")
        print(case.name)


if __name__ == "__main__":
    main()
