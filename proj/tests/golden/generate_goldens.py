#!/usr/bin/env python3
"""Regenerates the render goldens with libxslt (lxml).

For every <type>.xml payload in this directory, applies
share/styles/<type>/popup.xsl and list.xsl and writes <type>.popup.html and
<type>.list.html using the engine's serialization conventions (see
tests/conformance/generate_expected.py).
"""

import pathlib
import sys

from lxml import etree

HERE = pathlib.Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent / "conformance"))
from generate_expected import esc_text, write  # noqa: E402

STYLES = HERE.parent.parent / "share" / "styles"


def fragment(result):
    out = []
    top = result.getroot()
    while top is not None and top.getprevious() is not None:
        top = top.getprevious()
    while top is not None:
        write(top, out)
        top = top.getnext()
    return "".join(out)


def main():
    for payload in sorted(HERE.glob("*.xml")):
        kind = payload.stem
        doc = etree.parse(str(payload))
        for which in ("popup", "list"):
            sheet = etree.XSLT(etree.parse(str(STYLES / kind / (which + ".xsl"))))
            html = fragment(sheet(doc))
            (HERE / ("%s.%s.html" % (kind, which))).write_text(html + "\n")
            print(kind, which)


if __name__ == "__main__":
    main()
