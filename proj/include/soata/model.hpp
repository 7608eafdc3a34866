#pragma once

#include "soata/facts.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace soata {

using ElementId = std::string;

struct Topic {
    ElementId id;
    bool is_protected = false;
};

struct PortBinding {
    ElementId port;
    ElementId topic;
};

struct LogicalComponent {
    ElementId id;
    std::vector<PortBinding> pub_ports;
    std::vector<PortBinding> sub_ports;
};

struct ExecutionUnit {
    ElementId id;
    std::vector<ElementId> in_ports;
    std::vector<ElementId> out_ports;
};

struct NetworkInterface {
    ElementId id;
    std::vector<ElementId> in_ports;
    std::vector<ElementId> out_ports;
};

// Outside the system boundary; only out-ports.
struct PublicElement {
    ElementId id;
    std::vector<ElementId> out_ports;
};

struct Channel {
    ElementId from_port;
    ElementId to_port;

    auto operator<=>(const Channel&) const = default;
};

struct Allocation {
    ElementId component_port;
    ElementId platform_port;

    auto operator<=>(const Allocation&) const = default;
};

struct InformationFlow {
    ElementId ecu;
    ElementId entry_port;
    ElementId topic;

    auto operator<=>(const InformationFlow&) const = default;
};

struct SystemModel {
    std::vector<Topic> topics;
    std::vector<LogicalComponent> components;
    std::vector<ExecutionUnit> ecus;
    std::vector<NetworkInterface> networks;
    std::vector<PublicElement> publics;
    std::vector<Channel> channels;
    std::vector<Allocation> allocations;
    std::vector<InformationFlow> information_flows;

    const Topic* find_topic(std::string_view id) const;
    const LogicalComponent* find_component(std::string_view id) const;
    const ExecutionUnit* find_ecu(std::string_view id) const;
};

struct Violation {
    ElementId subject;
    std::string rule;
    std::string message;

    auto operator<=>(const Violation&) const = default;
};

std::string to_string(const Violation& v);

// Structural parse only: JSON syntax and the document layout. Dangling
// references survive and are reported by validate().
SystemModel parse_model(std::string_view document);

// parse_model plus a reference check; throws ReferenceError naming the
// first dangling id.
SystemModel load_model(std::string_view document);
SystemModel load_model_file(const std::string& path);

nlohmann::ordered_json to_json(const SystemModel& model);

// All invariant violations, sorted by (subject, rule, message).
std::vector<Violation> validate(const SystemModel& model);

// Throws InvalidModelError when validate() is non-empty.
FactBase to_facts(const SystemModel& model);

// Conservative over-approximation of if(ecu, p, tp): every ECU in-port with an
// allocated subscriber, crossed with every topic published by a component
// hosted on that ECU. Sorted.
std::vector<InformationFlow> derive_information_flows(const SystemModel& model);

// Components whose ports are allocated to a port of the given ECU, sorted.
std::vector<ElementId> hosted_components(const SystemModel& model, std::string_view ecu);

// ECUs hosting the given component, sorted.
std::vector<ElementId> hosting_ecus(const SystemModel& model, std::string_view component);

// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);

} // namespace soata
