"""Built-in knowledge bases and alignments for the benchmark suite.

Sizes follow the published KB inventory; concept names are plausible stand-ins
for the real vocabularies. Every concept grounds from its own identifier, and
the GEO and DPV fixtures additionally accept IRIs.
"""

from __future__ import annotations

from functools import lru_cache

from ..alignment import Alignment
from ..kb import KnowledgeBase, build_kb

__all__ = ["ALIGNMENT_IDS", "KB_IDS", "alignment", "all_alignments", "all_kbs", "kb"]

GEONAMES = "https://sws.geonames.org/"
DPV = "https://w3id.org/dpv#"


def _identity(concepts, extra=None):
    g = {c: c for c in concepts}
    g.update(extra or {})
    return g


def _geo000():
    cs = ["europe", "germany", "france", "bavaria"]
    iris = {f"{GEONAMES}6255148/": "europe", f"{GEONAMES}2921044/": "germany",
            f"{GEONAMES}3017382/": "france", f"{GEONAMES}2951839/": "bavaria"}
    return build_kb(cs, [("germany", "europe"), ("france", "europe"), ("bavaria", "germany")],
                    [("germany", "france")], gamma=_identity(cs, iris),
                    kb_id="GEO000", domain="mereological")


def _geo001():
    cs = ["iso:150", "iso:DE", "iso:FR"]
    return build_kb(cs, [("iso:DE", "iso:150"), ("iso:FR", "iso:150")], [("iso:DE", "iso:FR")],
                    gamma=_identity(cs), kb_id="GEO001", domain="mereological")


def _dpv000():
    cs = ["Purpose", "Commercial", "NonCommercial", "ResearchAndDevelopment", "ScientificResearch",
          "AcademicResearch", "CommercialResearch", "NonCommercialResearch", "Marketing",
          "ServiceProvision"]
    edges = [
        ("Commercial", "Purpose"), ("NonCommercial", "Purpose"), ("ResearchAndDevelopment", "Purpose"),
        ("ServiceProvision", "Purpose"), ("Marketing", "Commercial"),
        ("ScientificResearch", "ResearchAndDevelopment"), ("AcademicResearch", "ScientificResearch"),
        ("CommercialResearch", "ResearchAndDevelopment"), ("CommercialResearch", "Commercial"),
        ("NonCommercialResearch", "ResearchAndDevelopment"), ("NonCommercialResearch", "NonCommercial"),
    ]
    # deliberately one-sided negative coverage: nothing rules CommercialResearch out of NonCommercial
    disjoint = [("NonCommercialResearch", "Commercial")]
    return build_kb(cs, edges, disjoint, gamma=_identity(cs, {DPV + c: c for c in cs}), kb_id="DPV000")


def _dpv001():
    cs = ["gdpr:Purpose", "gdpr:Research", "gdpr:ScientificResearch", "gdpr:StatisticalPurpose",
          "gdpr:CommercialInterest", "gdpr:DirectMarketing"]
    edges = [
        ("gdpr:Research", "gdpr:Purpose"), ("gdpr:ScientificResearch", "gdpr:Research"),
        ("gdpr:StatisticalPurpose", "gdpr:Research"), ("gdpr:CommercialInterest", "gdpr:Purpose"),
        ("gdpr:DirectMarketing", "gdpr:CommercialInterest"),
    ]
    return build_kb(cs, edges, [], gamma=_identity(cs), kb_id="DPV001")


def _lng000():
    subtags = {"de": ["de-DE", "de-AT", "de-CH"], "fr": ["fr-FR", "fr-CA"], "en": ["en-GB", "en-US"]}
    cs = [c for base, subs in subtags.items() for c in [base, *subs]]
    edges = [(s, base) for base, subs in subtags.items() for s in subs]
    disjoint = [("de", "fr"), ("de", "en"), ("fr", "en")]
    return build_kb(cs, edges, disjoint, gamma=_identity(cs), kb_id="LNG000")


def _lng001():
    cs = ["gem", "deu", "eng", "roa", "fra", "ita"]
    edges = [("deu", "gem"), ("eng", "gem"), ("fra", "roa"), ("ita", "roa")]
    disjoint = [("gem", "roa"), ("deu", "eng"), ("fra", "ita")]
    return build_kb(cs, edges, disjoint, gamma=_identity(cs), kb_id="LNG001")


def _nom000():
    cs = ["sftp", "https", "ftps", "scp"]
    return build_kb(cs, gamma=_identity(cs), kb_id="NOM000", domain="nominal")


def _chn000():
    cs = [f"level{i}" for i in range(5)]
    return build_kb(cs, [(cs[i], cs[i + 1]) for i in range(4)], gamma=_identity(cs), kb_id="CHN000")


def _dia000():
    cs = ["top", "left", "right", "bottom"]
    edges = [("left", "top"), ("right", "top"), ("bottom", "left"), ("bottom", "right")]
    return build_kb(cs, edges, gamma=_identity(cs), kb_id="DIA000")


def _sng000():
    return build_kb(["only"], gamma={"only": "only"}, kb_id="SNG000")


def _nms000():
    cs = ["root", "a", "b", "shared", "a_only", "b_only"]
    edges = [("a", "root"), ("b", "root"), ("shared", "a"), ("shared", "b"),
             ("a_only", "a"), ("b_only", "b")]
    disjoint = [("a_only", "b"), ("b_only", "a")]
    return build_kb(cs, edges, disjoint, gamma=_identity(cs), kb_id="NMS000")


def _una000():
    # two unrelated labels that may or may not name the same thing
    cs = ["label_a", "label_b", "label_c"]
    return build_kb(cs, [("label_a", "label_c")], [], gamma=_identity(cs), kb_id="UNA000", una=False)


def _wit_a():
    return build_kb(["a", "b", "c"], [("a", "b"), ("a", "c")],
                    gamma={"v_a": "a", "v_b": "b", "v_c": "c"}, kb_id="WITA")


def _wit_b():
    return build_kb(["x", "y", "z"], [("x", "y"), ("x", "z")], gamma=_identity("xyz"), kb_id="WITB")


_BUILDERS = {
    "GEO000": _geo000, "GEO001": _geo001, "DPV000": _dpv000, "DPV001": _dpv001,
    "LNG000": _lng000, "LNG001": _lng001, "NOM000": _nom000, "CHN000": _chn000,
    "DIA000": _dia000, "SNG000": _sng000, "NMS000": _nms000, "UNA000": _una000,
    "WITA": _wit_a, "WITB": _wit_b,
}
KB_IDS = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def kb(kb_id: str) -> KnowledgeBase:
    return _BUILDERS[kb_id]()


def all_kbs() -> dict[str, KnowledgeBase]:
    return {k: kb(k) for k in KB_IDS}


_ALIGNMENTS = {
    # ISO 3166 into GeoNames: every ISO concept has a counterpart
    "GEO001-GEO000": ("GEO001", "GEO000", {"iso:150": "europe", "iso:DE": "germany", "iso:FR": "france"}),
    # GeoNames into ISO 3166: bavaria has no counterpart, so neither may anything above it
    "GEO000-GEO001": ("GEO000", "GEO001", {"france": "iso:FR"}),
    "LNG001-LNG000": ("LNG001", "LNG000", {"deu": "de", "eng": "en", "fra": "fr"}),
    "DPV001-DPV000": ("DPV001", "DPV000", {
        "gdpr:ScientificResearch": "ScientificResearch",
        "gdpr:CommercialInterest": "Commercial",
        "gdpr:DirectMarketing": "Marketing",
    }),
    "WITA-WITB": ("WITA", "WITB", {"a": "x", "b": "y", "c": "z"}),
    "WITA-WITB-lossy": ("WITA", "WITB", {"b": "y", "c": "z"}),
}
ALIGNMENT_IDS = tuple(_ALIGNMENTS)


@lru_cache(maxsize=None)
def alignment(alignment_id: str) -> Alignment:
    src, tgt, mapping = _ALIGNMENTS[alignment_id]
    return Alignment.from_mapping(src, tgt, mapping)


def all_alignments() -> dict[str, Alignment]:
    return {a: alignment(a) for a in ALIGNMENT_IDS}
