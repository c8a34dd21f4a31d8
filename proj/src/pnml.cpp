#include "petribench/pnml.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace petribench {

namespace {

namespace pt = boost::property_tree;

std::optional<std::string> attr(const pt::ptree& node, const char* name) {
    if (auto a = node.get_child_optional("<xmlattr>"))
        if (auto v = a->get_optional<std::string>(name)) return *v;
    return std::nullopt;
}

// <name><text>...</text></name> (or bare data for sloppy producers).
std::optional<std::string> text_of(const pt::ptree& node, const char* child) {
    if (auto c = node.get_child_optional(child)) {
        if (auto t = c->get_optional<std::string>("text")) return *t;
        return c->data();
    }
    return std::nullopt;
}

TokenCount parse_count(const std::string& s, const char* what) {
    TokenCount v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\n' || *b == '\t' || *b == '\r'))
        ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\n' || e[-1] == '\t' ||
                     e[-1] == '\r'))
        --e;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || b == e)
        throw pnml_error(std::string("bad ") + what + ": '" + s + "'");
    return v;
}

struct RawArc {
    std::string source, target, id;
    TokenCount weight = 1;
};

struct Collector {
    PetriNet net;
    std::unordered_map<std::string, PlaceId> places;       // by XML id
    std::unordered_map<std::string, TransitionId> trans;   // by XML id
    std::vector<RawArc> arcs;

    void walk_page(const pt::ptree& page) {
        for (const auto& [key, child] : page) {
            if (key == "place") {
                auto id = attr(child, "id");
                if (!id) throw pnml_error("place without id");
                TokenCount m0 = 0;
                if (auto t = text_of(child, "initialMarking"))
                    m0 = parse_count(*t, "initialMarking");
                std::string name = text_of(child, "name").value_or(*id);
                if (places.count(*id) || trans.count(*id))
                    throw pnml_error("duplicate node id: " + *id);
                places[*id] = net.add_place(name, m0);
            } else if (key == "transition") {
                auto id = attr(child, "id");
                if (!id) throw pnml_error("transition without id");
                std::string name = text_of(child, "name").value_or(*id);
                if (places.count(*id) || trans.count(*id))
                    throw pnml_error("duplicate node id: " + *id);
                trans[*id] = net.add_transition(name);
            } else if (key == "arc") {
                RawArc a;
                a.id = attr(child, "id").value_or("");
                auto s = attr(child, "source");
                auto t = attr(child, "target");
                if (!s || !t)
                    throw pnml_error("arc without source/target");
                a.source = *s;
                a.target = *t;
                if (auto w = text_of(child, "inscription"))
                    a.weight = parse_count(*w, "inscription");
                arcs.push_back(std::move(a));
            } else if (key == "page") {
                walk_page(child);  // flatten nested pages
            }
            // other elements (graphics, toolspecific, name) are ignored
        }
    }
};

}  // namespace

PetriNet parse_pnml(std::istream& in) {
    pt::ptree doc;
    try {
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace |
                                  pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw pnml_error(std::string("malformed XML: ") + e.what());
    }
    auto pnml = doc.get_child_optional("pnml");
    if (!pnml) throw pnml_error("no <pnml> root element");

    const pt::ptree* netnode = nullptr;
    for (const auto& [key, child] : *pnml) {
        if (key != "net") continue;
        if (netnode) throw pnml_error("expected exactly one <net>");
        netnode = &child;
    }
    if (!netnode) throw pnml_error("expected exactly one <net>");

    if (auto type = attr(*netnode, "type")) {
        const std::string& t = *type;
        bool pt_ok = t.find("ptnet") != std::string::npos ||
                     t.find("PTNet") != std::string::npos;
        if (!pt_ok && (t.find("symmetricnet") != std::string::npos ||
                       t.find("highlevelnet") != std::string::npos ||
                       t.find("hlpng") != std::string::npos ||
                       t.find("HLPNG") != std::string::npos))
            throw pnml_error("unsupported net type: " + t);
        if (!pt_ok) throw pnml_error("unsupported net type: " + t);
    }

    Collector c;
    c.net.name = text_of(*netnode, "name")
                     .value_or(attr(*netnode, "id").value_or("net"));
    // walk_page recurses into <page> children, so passing the net node
    // also tolerates node children directly under <net>.
    c.walk_page(*netnode);

    for (const RawArc& a : c.arcs) {
        auto sp = c.places.find(a.source);
        auto st = c.trans.find(a.source);
        auto tp = c.places.find(a.target);
        auto tt = c.trans.find(a.target);
        if (sp != c.places.end() && tt != c.trans.end())
            c.net.add_pre(tt->second, sp->second, a.weight);
        else if (st != c.trans.end() && tp != c.places.end())
            c.net.add_post(st->second, tp->second, a.weight);
        else if ((sp != c.places.end() || st != c.trans.end()) &&
                 (tp != c.places.end() || tt != c.trans.end()))
            throw pnml_error("arc must connect a place and a transition: " +
                             a.source + " -> " + a.target);
        else
            throw pnml_error("dangling arc endpoint: " + a.source + " -> " +
                             a.target);
    }

    if (auto problems = validate(c.net); !problems.empty())
        throw pnml_error("parsed net fails validation: " + problems.front());
    return c.net;
}

PetriNet parse_pnml_string(const std::string& xml) {
    std::istringstream in(xml);
    return parse_pnml(in);
}

PetriNet parse_pnml_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pnml_error("cannot open file: " + path);
    return parse_pnml(in);
}

namespace {

void xml_escape(const std::string& s, std::string& out) {
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
}

}  // namespace

void write_pnml(const PetriNet& net, std::ostream& out,
                const std::string& xml_namespace) {
    std::string buf;
    buf.reserve(256);
    auto esc = [&buf](const std::string& s) -> const std::string& {
        buf.clear();
        xml_escape(s, buf);
        return buf;
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<pnml xmlns=\"" << xml_namespace << "\">\n";
    out << "  <net id=\"net0\" type=\"" << kPtNetType << "\">\n";
    out << "    <name><text>" << esc(net.name) << "</text></name>\n";
    out << "    <page id=\"page0\">\n";
    for (PlaceId p = 0; p < net.place_count(); ++p) {
        out << "      <place id=\"p" << p << "\">\n";
        out << "        <name><text>" << esc(net.place_name(p))
            << "</text></name>\n";
        if (TokenCount m0 = net.initial_tokens(p))
            out << "        <initialMarking><text>" << m0
                << "</text></initialMarking>\n";
        out << "      </place>\n";
    }
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        out << "      <transition id=\"t" << t << "\">\n";
        out << "        <name><text>" << esc(net.transition_name(t))
            << "</text></name>\n";
        out << "      </transition>\n";
    }
    std::uint64_t arc_id = 0;
    auto emit_arc = [&](const std::string& src, const std::string& dst,
                        TokenCount w) {
        out << "      <arc id=\"a" << arc_id++ << "\" source=\"" << src
            << "\" target=\"" << dst << "\"";
        if (w == 1) {
            out << "/>\n";
        } else {
            out << ">\n        <inscription><text>" << w
                << "</text></inscription>\n      </arc>\n";
        }
    };
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        std::string tid = "t" + std::to_string(t);
        for (const Arc& a : net.pre(t))
            emit_arc("p" + std::to_string(a.place), tid, a.weight);
        for (const Arc& a : net.post(t))
            emit_arc(tid, "p" + std::to_string(a.place), a.weight);
    }
    out << "    </page>\n";
    out << "  </net>\n";
    out << "</pnml>\n";
}

std::string write_pnml_string(const PetriNet& net,
                              const std::string& xml_namespace) {
    std::ostringstream out;
    write_pnml(net, out, xml_namespace);
    return out.str();
}

void write_pnml_file(const PetriNet& net, const std::string& path,
                     const std::string& xml_namespace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pnml_error("cannot open file for writing: " + path);
    write_pnml(net, out, xml_namespace);
    if (!out.flush()) throw pnml_error("write failed: " + path);
}

}  // namespace petribench
