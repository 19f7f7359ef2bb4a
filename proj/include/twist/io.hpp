#pragma once

#include <json.hpp>

#include <string>

#include "twist/drawing.hpp"
#include "twist/generators.hpp"

namespace twist {

using Json = nlohmann::ordered_json;

// Path "-" means stdin / stdout.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& source = "<input>");
// Compact dump terminated by a newline.
std::string dump_json(const Json& j);

Json drawing_to_json(const Drawing& d);
// Rejects malformed documents and invalid drawings with InputError.
Drawing drawing_from_json(const Json& j);
Drawing read_drawing(const std::string& path);
void write_drawing(const Drawing& d, const std::string& path);

Json strip_to_json(const StripScene& s);
StripScene strip_from_json(const Json& j);
Json points_to_json(const PointScene& p);
PointScene points_from_json(const Json& j);

// "p/q" or "p", canonical form on output.
mpq_class parse_rational(const std::string& s);
std::string format_rational(const mpq_class& q);

// Accepts any of the three formats and returns the drawing.
Drawing drawing_from_any(const Json& j);

}  // namespace twist
