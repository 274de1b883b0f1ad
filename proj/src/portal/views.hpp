#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "portal/portal.hpp"

namespace planetary::portal {

// JSON shapes shared by the REST routes and the C API.
nlohmann::ordered_json bindings_to_json(const std::vector<std::string>& variables,
                                        const std::vector<triples::Binding>& rows);
nlohmann::ordered_json prereq_to_json(const PrereqView& view);
nlohmann::ordered_json history_to_json(const std::vector<store::CommitRecord>& records);
nlohmann::ordered_json definition_to_json(const services::Definition& d);
nlohmann::ordered_json msc_to_json(const std::vector<std::pair<std::string, std::string>>& rows);

// Parses and runs `text` on the current snapshot; the result carries the
// variables in select order. Throws Error{MalformedQuery}.
nlohmann::ordered_json run_query(const Portal& portal, const std::string& text,
                                 std::uint64_t* revision = nullptr);

}  // namespace planetary::portal
