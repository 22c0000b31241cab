"""RDF/XML interchange: a curated subset, not a general RDF graph parser.

Recognized vocabulary: ``owl:Class``, ``rdfs:subClassOf``, ``owl:equivalentClass``,
``owl:Restriction`` (``owl:onProperty`` plus one of ``owl:someValuesFrom`` /
``owl:allValuesFrom`` / ``owl:hasValue`` / ``owl:minCardinality`` /
``owl:maxCardinality``), ``owl:intersectionOf``, ``owl:unionOf``,
``owl:complementOf``, ``owl:oneOf``, ``owl:ObjectProperty``, ``owl:inverseOf``,
``rdf:type owl:TransitiveProperty``, ``rdfs:label`` with ``xml:lang``, and
``rdfs:Datatype`` restrictions carrying xsd interval facets. Anything else is an
UnsupportedConstruct error naming the element. Internal DTD entities declared
in a DOCTYPE prolog are expanded by the XML parser.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from decimal import Decimal, InvalidOperation
from typing import Optional

from .concepts import (
    And,
    AtLeast,
    AtMost,
    Atomic,
    BOTTOM,
    Bottom,
    ConceptExpr,
    DataSome,
    Exists,
    ForAll,
    HasValue,
    Not,
    NumericRange,
    OneOf,
    Or,
    RoleExpr,
    TOP,
    Top,
)
from .errors import ParseError, SourceLocation, UnsupportedConstruct
from .kb import EquivalentClasses, KnowledgeBase, SubClassOf

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
XML = "http://www.w3.org/XML/1998/namespace"


def _tag(ns: str, local: str) -> str:
    return "{%s}%s" % (ns, local)


_FACET_KEYS = {
    _tag(XSD, "minInclusive"): "min_inclusive",
    _tag(XSD, "minExclusive"): "min_exclusive",
    _tag(XSD, "maxInclusive"): "max_inclusive",
    _tag(XSD, "maxExclusive"): "max_exclusive",
}

def _fragment(uri: str) -> str:
    if uri.startswith(OWL):
        local = uri[len(OWL):]
        return local
    if "#" in uri:
        return uri.rsplit("#", 1)[1]
    return uri.rsplit("/", 1)[-1]


def _unsupported(elem: ET.Element) -> UnsupportedConstruct:
    return UnsupportedConstruct(f"unsupported RDF/XML element <{elem.tag}>")


class _Importer:
    def __init__(self) -> None:
        self.kb = KnowledgeBase()

    def name_of(self, elem: ET.Element) -> str:
        ref = elem.get(_tag(RDF, "about")) or elem.get(_tag(RDF, "ID")) or elem.get(
            _tag(RDF, "resource")
        )
        if ref is None:
            raise UnsupportedConstruct(
                f"element <{elem.tag}> lacks rdf:about/rdf:ID/rdf:resource"
            )
        return _fragment(ref)

    def run(self, source: str) -> KnowledgeBase:
        try:
            root = ET.fromstring(source)
        except ET.ParseError as exc:
            line, col = getattr(exc, "position", (1, 0))
            raise ParseError(
                SourceLocation(line, col + 1), "UnexpectedToken", f"malformed XML: {exc}"
            ) from exc
        if root.tag != _tag(RDF, "RDF"):
            raise _unsupported(root)
        for child in root:
            if child.tag == _tag(OWL, "Class"):
                self.import_class(child)
            elif child.tag == _tag(OWL, "ObjectProperty"):
                self.import_property(child)
            else:
                raise _unsupported(child)
        self.kb.finalize()
        return self.kb

    def import_class(self, elem: ET.Element) -> None:
        name = self.name_of(elem)
        subject = self.named_concept(name)
        if isinstance(subject, Atomic):
            self.kb.concept_names.add(name)
        for child in elem:
            if child.tag == _tag(RDFS, "subClassOf"):
                self.kb.add_axiom(SubClassOf(subject, self.concept_of_property(child)))
            elif child.tag == _tag(OWL, "equivalentClass"):
                self.kb.add_axiom(
                    EquivalentClasses(subject, self.concept_of_property(child))
                )
            elif child.tag == _tag(RDFS, "label"):
                lang = child.get(_tag(XML, "lang"), "en")
                self.kb.set_label(name, lang, (child.text or "").strip())
            else:
                raise _unsupported(child)

    def import_property(self, elem: ET.Element) -> None:
        name = self.name_of(elem)
        self.kb.role_names.add(name)
        for child in elem:
            if child.tag == _tag(OWL, "inverseOf"):
                self.kb.rbox.inverse_pairs.append((name, self.name_of(child)))
            elif child.tag == _tag(RDF, "type"):
                ref = child.get(_tag(RDF, "resource"), "")
                if _fragment(ref) == "TransitiveProperty":
                    self.kb.rbox.transitive_roles.add(name)
                else:
                    raise UnsupportedConstruct(f"unsupported property type {ref!r}")
            elif child.tag == _tag(RDFS, "label"):
                lang = child.get(_tag(XML, "lang"), "en")
                self.kb.set_label(name, lang, (child.text or "").strip())
            else:
                raise _unsupported(child)

    def named_concept(self, name: str) -> ConceptExpr:
        if name == "Thing":
            return TOP
        if name == "Nothing":
            return BOTTOM
        return Atomic(name)

    def concept_of_property(self, elem: ET.Element) -> ConceptExpr:
        """Concept carried by a property element: an rdf:resource reference or a
        single nested class/restriction/datatype element."""
        ref = elem.get(_tag(RDF, "resource"))
        children = list(elem)
        if ref is not None and not children:
            return self.named_concept(_fragment(ref))
        if len(children) != 1:
            raise UnsupportedConstruct(
                f"element <{elem.tag}> must carry exactly one class expression"
            )
        return self.concept_of_node(children[0])

    def concept_of_node(self, elem: ET.Element) -> ConceptExpr:
        if elem.tag == _tag(OWL, "Class"):
            return self.anonymous_class(elem)
        if elem.tag == _tag(OWL, "Restriction"):
            return self.restriction(elem)
        if elem.tag == _tag(RDF, "Description"):
            about = elem.get(_tag(RDF, "about"))
            if about is not None and not list(elem):
                return self.named_concept(_fragment(about))
            if self.is_datatype_node(elem):
                raise UnsupportedConstruct(
                    "datatype restriction outside owl:someValuesFrom"
                )
            raise _unsupported(elem)
        raise _unsupported(elem)

    def anonymous_class(self, elem: ET.Element) -> ConceptExpr:
        about = elem.get(_tag(RDF, "about"))
        children = list(elem)
        if about is not None and not children:
            return self.named_concept(_fragment(about))
        if len(children) != 1:
            raise UnsupportedConstruct("anonymous owl:Class needs exactly one operator")
        child = children[0]
        if child.tag == _tag(OWL, "intersectionOf"):
            return And(tuple(self.collection_concepts(child)))
        if child.tag == _tag(OWL, "unionOf"):
            return Or(tuple(self.collection_concepts(child)))
        if child.tag == _tag(OWL, "complementOf"):
            return Not(self.concept_of_property(child))
        if child.tag == _tag(OWL, "oneOf"):
            names = []
            for item in child:
                if item.tag != _tag(RDF, "Description"):
                    raise _unsupported(item)
                names.append(self.name_of(item))
                self.kb.individual_names.add(names[-1])
            if not names:
                raise UnsupportedConstruct("owl:oneOf collection is empty")
            return OneOf(tuple(names))
        raise _unsupported(child)

    def collection_concepts(self, elem: ET.Element) -> list[ConceptExpr]:
        out = [self.concept_of_node(child) for child in elem]
        if len(out) < 2:
            raise UnsupportedConstruct(
                f"<{elem.tag}> collection needs at least two members"
            )
        return out

    def restriction(self, elem: ET.Element) -> ConceptExpr:
        prop: Optional[str] = None
        body: Optional[ConceptExpr] = None
        for child in elem:
            if child.tag == _tag(OWL, "onProperty"):
                prop = self.name_of(child)
            elif child.tag in (_tag(OWL, "someValuesFrom"), _tag(OWL, "allValuesFrom")):
                if prop is None:
                    raise UnsupportedConstruct("owl:onProperty must precede the filler")
                datatype = self.maybe_datatype_filler(child)
                if datatype is not None:
                    if child.tag == _tag(OWL, "allValuesFrom"):
                        raise UnsupportedConstruct(
                            "datatype fillers are only supported under owl:someValuesFrom"
                        )
                    self.kb.data_property_names.add(prop)
                    body = DataSome(prop, datatype)
                else:
                    filler = self.concept_of_property(child)
                    role_expr = RoleExpr(prop)
                    body = (
                        Exists(role_expr, filler)
                        if child.tag == _tag(OWL, "someValuesFrom")
                        else ForAll(role_expr, filler)
                    )
            elif child.tag == _tag(OWL, "hasValue"):
                if prop is None:
                    raise UnsupportedConstruct("owl:onProperty must precede the filler")
                individual = self.name_of(child)
                self.kb.individual_names.add(individual)
                body = HasValue(RoleExpr(prop), individual)
            elif child.tag in (_tag(OWL, "minCardinality"), _tag(OWL, "maxCardinality")):
                if prop is None:
                    raise UnsupportedConstruct("owl:onProperty must precede the filler")
                try:
                    n = int((child.text or "").strip())
                except ValueError:
                    raise UnsupportedConstruct(
                        f"cardinality must be an integer, got {child.text!r}"
                    )
                if child.tag == _tag(OWL, "minCardinality"):
                    body = AtLeast(n, RoleExpr(prop))
                else:
                    body = AtMost(n, RoleExpr(prop))
            else:
                raise _unsupported(child)
        if prop is None or body is None:
            raise UnsupportedConstruct("owl:Restriction needs onProperty and a filler")
        return body

    def is_datatype_node(self, elem: ET.Element) -> bool:
        return any(
            child.tag == _tag(RDF, "type")
            and _fragment(child.get(_tag(RDF, "resource"), "")) == "Datatype"
            for child in elem
        )

    def maybe_datatype_filler(self, elem: ET.Element) -> Optional[NumericRange]:
        children = list(elem)
        if len(children) != 1 or children[0].tag != _tag(RDF, "Description"):
            return None
        node = children[0]
        if not self.is_datatype_node(node):
            return None
        fields: dict[str, Decimal] = {}
        for child in node:
            if child.tag == _tag(RDF, "type"):
                continue
            if child.tag == _tag(OWL, "onDatatype"):
                continue
            if child.tag == _tag(OWL, "withRestrictions"):
                for item in child:
                    if item.tag != _tag(RDF, "Description"):
                        raise _unsupported(item)
                    for facet in item:
                        key = _FACET_KEYS.get(facet.tag)
                        if key is None:
                            raise _unsupported(facet)
                        try:
                            fields[key] = Decimal((facet.text or "").strip())
                        except InvalidOperation:
                            raise UnsupportedConstruct(
                                f"malformed facet value {facet.text!r}"
                            )
            else:
                raise _unsupported(child)
        try:
            return NumericRange(**fields)
        except ValueError as exc:
            raise UnsupportedConstruct(str(exc))


def import_rdfxml(source: str) -> KnowledgeBase:
    """Load the RDF/XML subset into a knowledge base."""
    return _Importer().run(source)


# --- export ---------------------------------------------------------------------


class _Exporter:
    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        ET.register_namespace("rdf", RDF)
        ET.register_namespace("rdfs", RDFS)
        ET.register_namespace("owl", OWL)
        ET.register_namespace("xsd", XSD)

    def run(self) -> str:
        if self.kb.abox:
            raise UnsupportedConstruct("assertions are not expressible in the RDF/XML subset")
        for r in (
            self.kb.rbox.functional_roles
            | self.kb.rbox.inverse_functional_roles
            | self.kb.rbox.symmetric_roles
        ):
            raise UnsupportedConstruct(
                f"role characteristic of '{r}' is not expressible in the RDF/XML subset"
            )
        if self.kb.rbox.sub_role_axioms or self.kb.rbox.equivalent_roles:
            raise UnsupportedConstruct(
                "role hierarchies are not expressible in the RDF/XML subset"
            )
        root = ET.Element(_tag(RDF, "RDF"))

        for name in sorted(self.kb.role_names):
            elem = ET.SubElement(root, _tag(OWL, "ObjectProperty"))
            elem.set(_tag(RDF, "about"), f"#{name}")
            for a, b in self.kb.rbox.inverse_pairs:
                if a == name:
                    inv = ET.SubElement(elem, _tag(OWL, "inverseOf"))
                    inv.set(_tag(RDF, "resource"), f"#{b}")
            if name in self.kb.rbox.transitive_roles:
                t = ET.SubElement(elem, _tag(RDF, "type"))
                t.set(_tag(RDF, "resource"), f"{OWL}TransitiveProperty")
            self.emit_labels(elem, name)

        by_class: dict[str, list] = {}
        for ax in self.kb.tbox:
            if isinstance(ax, SubClassOf) and isinstance(ax.sub, Atomic):
                by_class.setdefault(ax.sub.name, []).append(ax)
            elif isinstance(ax, EquivalentClasses) and isinstance(ax.a, Atomic):
                by_class.setdefault(ax.a.name, []).append(ax)
            else:
                raise UnsupportedConstruct(
                    "only axioms about named classes are expressible in the RDF/XML subset"
                )

        for name in sorted(self.kb.concept_names | set(by_class)):
            elem = ET.SubElement(root, _tag(OWL, "Class"))
            elem.set(_tag(RDF, "about"), f"#{name}")
            self.emit_labels(elem, name)
            for ax in by_class.get(name, ()):
                if isinstance(ax, SubClassOf):
                    holder = ET.SubElement(elem, _tag(RDFS, "subClassOf"))
                    self.emit_concept(holder, ax.sup)
                else:
                    holder = ET.SubElement(elem, _tag(OWL, "equivalentClass"))
                    self.emit_concept(holder, ax.b)

        ET.indent(root)
        return '<?xml version="1.0"?>\n' + ET.tostring(root, encoding="unicode") + "\n"

    def emit_labels(self, elem: ET.Element, entity: str) -> None:
        for (name, lang) in sorted(self.kb.labels):
            if name == entity:
                label = ET.SubElement(elem, _tag(RDFS, "label"))
                label.set(_tag(XML, "lang"), lang)
                label.text = self.kb.labels[(name, lang)]

    def emit_concept(self, holder: ET.Element, c: ConceptExpr) -> None:
        """Attach concept ``c`` to a property element, by reference when named."""
        if isinstance(c, (Atomic, Top, Bottom)):
            holder.set(_tag(RDF, "resource"), self.concept_ref(c))
            return
        holder.append(self.concept_node(c))

    def concept_ref(self, c: ConceptExpr) -> str:
        if isinstance(c, Top):
            return f"{OWL}Thing"
        if isinstance(c, Bottom):
            return f"{OWL}Nothing"
        assert isinstance(c, Atomic)
        return f"#{c.name}"

    def concept_node(self, c: ConceptExpr) -> ET.Element:
        if isinstance(c, (Atomic, Top, Bottom)):
            elem = ET.Element(_tag(RDF, "Description"))
            elem.set(_tag(RDF, "about"), self.concept_ref(c))
            return elem
        if isinstance(c, (And, Or)):
            wrapper = ET.Element(_tag(OWL, "Class"))
            coll = ET.SubElement(
                wrapper, _tag(OWL, "intersectionOf" if isinstance(c, And) else "unionOf")
            )
            coll.set(_tag(RDF, "parseType"), "Collection")
            for op in c.operands:
                coll.append(self.concept_node(op))
            return wrapper
        if isinstance(c, Not):
            wrapper = ET.Element(_tag(OWL, "Class"))
            comp = ET.SubElement(wrapper, _tag(OWL, "complementOf"))
            self.emit_concept(comp, c.operand)
            return wrapper
        if isinstance(c, OneOf):
            wrapper = ET.Element(_tag(OWL, "Class"))
            coll = ET.SubElement(wrapper, _tag(OWL, "oneOf"))
            coll.set(_tag(RDF, "parseType"), "Collection")
            for name in c.individuals:
                item = ET.Element(_tag(RDF, "Description"))
                item.set(_tag(RDF, "about"), f"#{name}")
                coll.append(item)
            return wrapper
        if isinstance(c, (Exists, ForAll, AtLeast, AtMost, HasValue)):
            if c.role.inverted:
                raise UnsupportedConstruct(
                    "inverse roles inside restrictions are not expressible in the RDF/XML subset"
                )
            elem = ET.Element(_tag(OWL, "Restriction"))
            on = ET.SubElement(elem, _tag(OWL, "onProperty"))
            on.set(_tag(RDF, "resource"), f"#{c.role.name}")
            if isinstance(c, Exists):
                holder = ET.SubElement(elem, _tag(OWL, "someValuesFrom"))
                self.emit_concept(holder, c.filler)
            elif isinstance(c, ForAll):
                holder = ET.SubElement(elem, _tag(OWL, "allValuesFrom"))
                self.emit_concept(holder, c.filler)
            elif isinstance(c, HasValue):
                holder = ET.SubElement(elem, _tag(OWL, "hasValue"))
                holder.set(_tag(RDF, "resource"), f"#{c.individual}")
            else:
                local = "minCardinality" if isinstance(c, AtLeast) else "maxCardinality"
                holder = ET.SubElement(elem, _tag(OWL, local))
                holder.set(
                    _tag(RDF, "datatype"), f"{XSD}nonNegativeInteger"
                )
                holder.text = str(c.n)
            return elem
        if isinstance(c, DataSome):
            elem = ET.Element(_tag(OWL, "Restriction"))
            on = ET.SubElement(elem, _tag(OWL, "onProperty"))
            on.set(_tag(RDF, "resource"), f"#{c.property}")
            holder = ET.SubElement(elem, _tag(OWL, "someValuesFrom"))
            desc = ET.SubElement(holder, _tag(RDF, "Description"))
            t = ET.SubElement(desc, _tag(RDF, "type"))
            t.set(_tag(RDF, "resource"), f"{RDFS}Datatype")
            on_dt = ET.SubElement(desc, _tag(OWL, "onDatatype"))
            on_dt.set(_tag(RDF, "resource"), f"{XSD}decimal")
            with_r = ET.SubElement(desc, _tag(OWL, "withRestrictions"))
            with_r.set(_tag(RDF, "parseType"), "Collection")
            for key, attr in (
                ("minInclusive", c.range.min_inclusive),
                ("minExclusive", c.range.min_exclusive),
                ("maxInclusive", c.range.max_inclusive),
                ("maxExclusive", c.range.max_exclusive),
            ):
                if attr is not None:
                    item = ET.SubElement(with_r, _tag(RDF, "Description"))
                    facet = ET.SubElement(item, _tag(XSD, key))
                    facet.set(_tag(RDF, "datatype"), f"{XSD}decimal")
                    facet.text = str(attr)
            return elem
        raise UnsupportedConstruct(f"cannot express {c!r} in the RDF/XML subset")


def export_rdfxml(kb: KnowledgeBase) -> str:
    """Render a knowledge base as the RDF/XML subset; the result re-imports to a
    logically identical KB."""
    return _Exporter(kb).run()
