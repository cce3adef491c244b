#pragma once

#include <string>

#include "qtilt/presentation.hpp"
#include "qtilt/repmod.hpp"

namespace qtilt {

// Strict JSON: unknown keys rejected, scalars given as text, composition
// convention declared per file and normalized to traversal order on input.
Presentation parse_presentation(const std::string& text);
std::string emit_presentation(const Presentation& pres);

// Module files carry dims per vertex name and a row-major matrix per arrow
// name; the algebra they reference is supplied by the caller.
Representation parse_module(const std::string& text, AlgebraPtr A);
std::string emit_module(const Representation& M, const std::string& algebra_path);

Presentation load_presentation_file(const std::string& path);
// Resolves the module's algebra path relative to the module file directory.
Representation load_module_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qtilt
