#include "soata/model.hpp"

#include "json_util.hpp"
#include "soata/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace soata {

using detail::json;

const Topic* SystemModel::find_topic(std::string_view id) const {
    auto it = std::find_if(topics.begin(), topics.end(), [&](const Topic& t) { return t.id == id; });
    return it == topics.end() ? nullptr : &*it;
}

const LogicalComponent* SystemModel::find_component(std::string_view id) const {
    auto it = std::find_if(components.begin(), components.end(),
                           [&](const LogicalComponent& c) { return c.id == id; });
    return it == components.end() ? nullptr : &*it;
}

const ExecutionUnit* SystemModel::find_ecu(std::string_view id) const {
    auto it = std::find_if(ecus.begin(), ecus.end(), [&](const ExecutionUnit& e) { return e.id == id; });
    return it == ecus.end() ? nullptr : &*it;
}

std::string to_string(const Violation& v) {
    return v.subject + ": " + v.rule + ": " + v.message;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------- parsing

namespace {

std::vector<PortBinding> parse_bindings(const json& j, const std::string& where, const char* key) {
    std::vector<PortBinding> out;
    const auto& arr = detail::get_array(j, where, key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string at = where + "/" + key + "/" + std::to_string(i);
        detail::require_object(arr[i], at);
        detail::check_keys(arr[i], at, {"port", "topic"});
        out.push_back({detail::get_string(arr[i], at, "port"), detail::get_string(arr[i], at, "topic")});
    }
    return out;
}

template <typename Fn>
void for_each_object(const json& doc, const char* key, std::initializer_list<std::string_view> allowed,
                     Fn&& fn) {
    const auto& arr = detail::get_array(doc, "", key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string at = std::string("/") + key + "/" + std::to_string(i);
        detail::require_object(arr[i], at);
        detail::check_keys(arr[i], at, allowed);
        fn(arr[i], at);
    }
}

} // namespace

SystemModel parse_model(std::string_view document) {
    json doc = detail::parse_document(document, "model");
    detail::require_object(doc, "model");
    detail::check_keys(doc, "model", {"schema", "topics", "components", "ecus", "networks", "publics",
                                      "channels", "allocations", "information_flows"});
    detail::require_schema_version(doc, "model", true);

    SystemModel m;
    for_each_object(doc, "topics", {"id", "protected"}, [&](const json& o, const std::string& at) {
        m.topics.push_back({detail::get_string(o, at, "id"), detail::get_bool(o, at, "protected", false)});
    });
    for_each_object(doc, "components", {"id", "pub_ports", "sub_ports"},
                    [&](const json& o, const std::string& at) {
                        m.components.push_back({detail::get_string(o, at, "id"),
                                                parse_bindings(o, at, "pub_ports"),
                                                parse_bindings(o, at, "sub_ports")});
                    });
    for_each_object(doc, "ecus", {"id", "in_ports", "out_ports"}, [&](const json& o, const std::string& at) {
        m.ecus.push_back({detail::get_string(o, at, "id"), detail::get_string_array(o, at, "in_ports"),
                          detail::get_string_array(o, at, "out_ports")});
    });
    for_each_object(doc, "networks", {"id", "in_ports", "out_ports"},
                    [&](const json& o, const std::string& at) {
                        m.networks.push_back({detail::get_string(o, at, "id"),
                                              detail::get_string_array(o, at, "in_ports"),
                                              detail::get_string_array(o, at, "out_ports")});
                    });
    for_each_object(doc, "publics", {"id", "out_ports"}, [&](const json& o, const std::string& at) {
        m.publics.push_back({detail::get_string(o, at, "id"), detail::get_string_array(o, at, "out_ports")});
    });
    for_each_object(doc, "channels", {"from_port", "to_port"}, [&](const json& o, const std::string& at) {
        m.channels.push_back({detail::get_string(o, at, "from_port"), detail::get_string(o, at, "to_port")});
    });
    for_each_object(doc, "allocations", {"component_port", "platform_port"},
                    [&](const json& o, const std::string& at) {
                        m.allocations.push_back({detail::get_string(o, at, "component_port"),
                                                 detail::get_string(o, at, "platform_port")});
                    });
    for_each_object(doc, "information_flows", {"ecu", "entry_port", "topic"},
                    [&](const json& o, const std::string& at) {
                        m.information_flows.push_back({detail::get_string(o, at, "ecu"),
                                                       detail::get_string(o, at, "entry_port"),
                                                       detail::get_string(o, at, "topic")});
                    });
    return m;
}

SystemModel load_model(std::string_view document) {
    SystemModel m = parse_model(document);
    for (const auto& v : validate(m)) {
        if (v.rule == "unknown-port" || v.rule == "unknown-topic" || v.rule == "unknown-ecu") {
            throw ReferenceError(v.subject, "model: " + to_string(v));
        }
    }
    return m;
}

SystemModel load_model_file(const std::string& path) {
    return load_model(read_file(path));
}

nlohmann::ordered_json to_json(const SystemModel& m) {
    using oj = nlohmann::ordered_json;
    auto bindings = [](const std::vector<PortBinding>& bs) {
        oj arr = oj::array();
        for (const auto& b : bs) {
            arr.push_back({{"port", b.port}, {"topic", b.topic}});
        }
        return arr;
    };
    oj doc;
    doc["schema"] = 1;
    doc["topics"] = oj::array();
    for (const auto& t : m.topics) {
        doc["topics"].push_back({{"id", t.id}, {"protected", t.is_protected}});
    }
    doc["components"] = oj::array();
    for (const auto& c : m.components) {
        doc["components"].push_back(
            {{"id", c.id}, {"pub_ports", bindings(c.pub_ports)}, {"sub_ports", bindings(c.sub_ports)}});
    }
    doc["ecus"] = oj::array();
    for (const auto& e : m.ecus) {
        doc["ecus"].push_back({{"id", e.id}, {"in_ports", e.in_ports}, {"out_ports", e.out_ports}});
    }
    doc["networks"] = oj::array();
    for (const auto& n : m.networks) {
        doc["networks"].push_back({{"id", n.id}, {"in_ports", n.in_ports}, {"out_ports", n.out_ports}});
    }
    doc["publics"] = oj::array();
    for (const auto& p : m.publics) {
        doc["publics"].push_back({{"id", p.id}, {"out_ports", p.out_ports}});
    }
    doc["channels"] = oj::array();
    for (const auto& c : m.channels) {
        doc["channels"].push_back({{"from_port", c.from_port}, {"to_port", c.to_port}});
    }
    doc["allocations"] = oj::array();
    for (const auto& a : m.allocations) {
        doc["allocations"].push_back({{"component_port", a.component_port}, {"platform_port", a.platform_port}});
    }
    doc["information_flows"] = oj::array();
    for (const auto& f : m.information_flows) {
        doc["information_flows"].push_back({{"ecu", f.ecu}, {"entry_port", f.entry_port}, {"topic", f.topic}});
    }
    return doc;
}

// ------------------------------------------------------------- validation

namespace {

enum class PortKind { component_pub, component_sub, ecu_in, ecu_out, net_in, net_out, public_out };

struct PortInfo {
    PortKind kind;
    ElementId owner;
};

class Validator {
public:
    explicit Validator(const SystemModel& m) : m_(m) {}

    std::vector<Violation> run() {
        collect_declarations();
        check_components();
        check_channels();
        check_allocations();
        check_flows();
        std::sort(out_.begin(), out_.end());
        out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
        return std::move(out_);
    }

private:
    void report(const ElementId& subject, std::string rule, std::string message) {
        out_.push_back({subject, std::move(rule), std::move(message)});
    }

    void declare_element(const ElementId& id, const char* kind) {
        if (id.empty()) {
            report(id, "empty-id", std::string(kind) + " with empty id");
            return;
        }
        if (!elements_.insert(id).second) {
            report(id, "duplicate-element", std::string(kind) + " id \"" + id + "\" declared more than once");
        }
    }

    void declare_port(const ElementId& port, PortKind kind, const ElementId& owner) {
        if (port.empty()) {
            report(owner, "empty-id", "port with empty id on \"" + owner + "\"");
            return;
        }
        auto [it, fresh] = ports_.try_emplace(port, PortInfo{kind, owner});
        if (!fresh) {
            report(port, "duplicate-port",
                   "port \"" + port + "\" declared on \"" + it->second.owner + "\" and \"" + owner + "\"");
        }
    }

    void collect_declarations() {
        for (const auto& t : m_.topics) {
            if (t.id.empty()) {
                report(t.id, "empty-id", "topic with empty id");
            } else if (!topics_.insert(t.id).second) {
                report(t.id, "duplicate-topic", "topic \"" + t.id + "\" declared more than once");
            }
        }
        for (const auto& c : m_.components) {
            declare_element(c.id, "component");
            for (const auto& b : c.pub_ports) {
                declare_port(b.port, PortKind::component_pub, c.id);
            }
            for (const auto& b : c.sub_ports) {
                declare_port(b.port, PortKind::component_sub, c.id);
            }
        }
        for (const auto& e : m_.ecus) {
            declare_element(e.id, "ecu");
            for (const auto& p : e.in_ports) {
                declare_port(p, PortKind::ecu_in, e.id);
            }
            for (const auto& p : e.out_ports) {
                declare_port(p, PortKind::ecu_out, e.id);
            }
        }
        for (const auto& n : m_.networks) {
            declare_element(n.id, "network");
            for (const auto& p : n.in_ports) {
                declare_port(p, PortKind::net_in, n.id);
            }
            for (const auto& p : n.out_ports) {
                declare_port(p, PortKind::net_out, n.id);
            }
        }
        for (const auto& p : m_.publics) {
            declare_element(p.id, "public element");
            for (const auto& port : p.out_ports) {
                declare_port(port, PortKind::public_out, p.id);
            }
        }
    }

    void check_components() {
        for (const auto& c : m_.components) {
            for (const auto* list : {&c.pub_ports, &c.sub_ports}) {
                for (const auto& b : *list) {
                    if (!topics_.contains(b.topic)) {
                        report(b.topic, "unknown-topic",
                               "port \"" + b.port + "\" of \"" + c.id + "\" binds undeclared topic \"" + b.topic +
                                   "\"");
                    }
                }
            }
        }
    }

    const PortInfo* port(const ElementId& id, const std::string& context) {
        auto it = ports_.find(id);
        if (it == ports_.end()) {
            report(id, "unknown-port", context + " references undeclared port \"" + id + "\"");
            return nullptr;
        }
        return &it->second;
    }

    static bool shape_matches(const PortInfo& from, const PortInfo& to) {
        switch (from.kind) {
        case PortKind::public_out: // write4
        case PortKind::ecu_out:    // write1
            return to.kind == PortKind::net_in;
        case PortKind::ecu_in: // write2
            return to.kind == PortKind::ecu_out && to.owner == from.owner;
        case PortKind::net_in: // write3
            return to.kind == PortKind::net_out && to.owner == from.owner;
        case PortKind::net_out: // read2
            return to.kind == PortKind::ecu_in;
        default:
            return false;
        }
    }

    void check_channels() {
        std::set<Channel> seen;
        for (const auto& c : m_.channels) {
            std::string ctx = "channel " + c.from_port + " -> " + c.to_port;
            const PortInfo* from = port(c.from_port, ctx);
            const PortInfo* to = port(c.to_port, ctx);
            if (from && to && !shape_matches(*from, *to)) {
                report(c.from_port, "channel-shape", ctx + " matches no write/read rule shape");
            }
            if (!seen.insert(c).second) {
                report(c.from_port, "duplicate-channel", ctx + " declared more than once");
            }
        }
    }

    void check_allocations() {
        std::set<Allocation> seen;
        for (const auto& a : m_.allocations) {
            std::string ctx = "allocation " + a.component_port + " -> " + a.platform_port;
            const PortInfo* cp = port(a.component_port, ctx);
            const PortInfo* pp = port(a.platform_port, ctx);
            if (cp && pp) {
                bool ok = (cp->kind == PortKind::component_pub && pp->kind == PortKind::ecu_out) ||
                          (cp->kind == PortKind::component_sub && pp->kind == PortKind::ecu_in);
                if (!ok) {
                    report(a.component_port, "allocation-direction",
                           ctx + ": publisher ports must map to ECU out-ports and subscriber ports to ECU in-ports");
                }
            }
            if (!seen.insert(a).second) {
                report(a.component_port, "duplicate-allocation", ctx + " declared more than once");
            }
        }
    }

    void check_flows() {
        std::set<InformationFlow> seen;
        for (const auto& f : m_.information_flows) {
            std::string ctx = "information flow (" + f.ecu + ", " + f.entry_port + ", " + f.topic + ")";
            bool ecu_known = m_.find_ecu(f.ecu) != nullptr;
            if (!ecu_known) {
                report(f.ecu, "unknown-ecu", ctx + " references undeclared ECU \"" + f.ecu + "\"");
            }
            if (!topics_.contains(f.topic)) {
                report(f.topic, "unknown-topic", ctx + " references undeclared topic \"" + f.topic + "\"");
            }
            const PortInfo* p = port(f.entry_port, ctx);
            if (p && ecu_known && !(p->kind == PortKind::ecu_in && p->owner == f.ecu)) {
                report(f.entry_port, "flow-entry", ctx + ": entry port is not an in-port of the ECU");
            }
            if (!seen.insert(f).second) {
                report(f.ecu, "duplicate-flow", ctx + " declared more than once");
            }
        }
    }

    const SystemModel& m_;
    std::set<ElementId> topics_;
    std::set<ElementId> elements_;
    std::map<ElementId, PortInfo> ports_;
    std::vector<Violation> out_;
};

} // namespace

std::vector<Violation> validate(const SystemModel& model) {
    return Validator(model).run();
}

// ------------------------------------------------------------------ facts

FactBase to_facts(const SystemModel& m) {
    auto violations = validate(m);
    if (!violations.empty()) {
        throw InvalidModelError("model has " + std::to_string(violations.size()) +
                                " violation(s); first: " + to_string(violations.front()));
    }
    FactBase fb;
    auto add = [&](Predicate p, std::vector<std::string> args) { fb.insert({p, std::move(args)}); };

    for (const auto& t : m.topics) {
        if (t.is_protected) {
            add(Predicate::pro, {t.id});
        }
    }
    for (const auto& c : m.components) {
        for (const auto& b : c.pub_ports) {
            add(Predicate::cpo, {c.id, b.port});
            add(Predicate::pub, {c.id, b.port, b.topic});
        }
        for (const auto& b : c.sub_ports) {
            add(Predicate::cpi, {c.id, b.port});
            add(Predicate::sub, {c.id, b.port, b.topic});
        }
    }
    for (const auto& e : m.ecus) {
        for (const auto& p : e.in_ports) {
            add(Predicate::ecui, {e.id, p});
        }
        for (const auto& p : e.out_ports) {
            add(Predicate::ecuo, {e.id, p});
        }
    }
    for (const auto& n : m.networks) {
        for (const auto& p : n.in_ports) {
            add(Predicate::neti, {n.id, p});
        }
        for (const auto& p : n.out_ports) {
            add(Predicate::neto, {n.id, p});
        }
    }
    for (const auto& pe : m.publics) {
        for (const auto& p : pe.out_ports) {
            add(Predicate::public_, {pe.id, p});
        }
    }
    for (const auto& c : m.channels) {
        add(Predicate::ch, {c.from_port, c.to_port});
    }
    for (const auto& a : m.allocations) {
        add(Predicate::alloc, {a.component_port, a.platform_port});
    }
    for (const auto& f : m.information_flows) {
        add(Predicate::flow, {f.ecu, f.entry_port, f.topic});
    }
    return fb;
}

// ------------------------------------------------------- hosting / flows

namespace {

// platform port -> owning ECU
std::map<ElementId, ElementId> ecu_port_owners(const SystemModel& m) {
    std::map<ElementId, ElementId> owner;
    for (const auto& e : m.ecus) {
        for (const auto& p : e.in_ports) {
            owner[p] = e.id;
        }
        for (const auto& p : e.out_ports) {
            owner[p] = e.id;
        }
    }
    return owner;
}

// component port -> owning component
std::map<ElementId, ElementId> component_port_owners(const SystemModel& m) {
    std::map<ElementId, ElementId> owner;
    for (const auto& c : m.components) {
        for (const auto& b : c.pub_ports) {
            owner[b.port] = c.id;
        }
        for (const auto& b : c.sub_ports) {
            owner[b.port] = c.id;
        }
    }
    return owner;
}

} // namespace

std::vector<ElementId> hosted_components(const SystemModel& m, std::string_view ecu) {
    auto ecu_of = ecu_port_owners(m);
    auto comp_of = component_port_owners(m);
    std::set<ElementId> out;
    for (const auto& a : m.allocations) {
        auto e = ecu_of.find(a.platform_port);
        auto c = comp_of.find(a.component_port);
        if (e != ecu_of.end() && c != comp_of.end() && e->second == ecu) {
            out.insert(c->second);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<ElementId> hosting_ecus(const SystemModel& m, std::string_view component) {
    auto ecu_of = ecu_port_owners(m);
    auto comp_of = component_port_owners(m);
    std::set<ElementId> out;
    for (const auto& a : m.allocations) {
        auto e = ecu_of.find(a.platform_port);
        auto c = comp_of.find(a.component_port);
        if (e != ecu_of.end() && c != comp_of.end() && c->second == component) {
            out.insert(e->second);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<InformationFlow> derive_information_flows(const SystemModel& m) {
    std::set<ElementId> sub_ports;
    for (const auto& c : m.components) {
        for (const auto& b : c.sub_ports) {
            sub_ports.insert(b.port);
        }
    }
    std::set<ElementId> fed_in_ports; // ECU in-ports carrying an allocated subscriber
    for (const auto& a : m.allocations) {
        if (sub_ports.contains(a.component_port)) {
            fed_in_ports.insert(a.platform_port);
        }
    }

    std::set<InformationFlow> out;
    for (const auto& e : m.ecus) {
        std::set<ElementId> published;
        for (const auto& cid : hosted_components(m, e.id)) {
            if (const auto* c = m.find_component(cid)) {
                for (const auto& b : c->pub_ports) {
                    published.insert(b.topic);
                }
            }
        }
        for (const auto& p : e.in_ports) {
            if (!fed_in_ports.contains(p)) {
                continue;
            }
            for (const auto& tp : published) {
                out.insert({e.id, p, tp});
            }
        }
    }
    return {out.begin(), out.end()};
}

} // namespace soata
