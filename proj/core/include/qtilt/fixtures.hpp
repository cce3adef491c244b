#pragma once

#include <string>
#include <vector>

#include "qtilt/presentation.hpp"

namespace qtilt {

// Built-in demonstration algebras addressable by id: "ex2.2", "ex4.9",
// "ex6.9", "ist", "merge-demo", and the generated family "trunc:<seed>".
struct Fixture {
  std::string id;
  Presentation presentation;
  std::vector<std::string> e;  // vertex names of the distinguished corner
};

bool is_fixture_id(const std::string& id);
Fixture get_fixture(const std::string& id);  // InputError on unknown id

std::vector<std::string> fixture_ids();  // the named ones, excluding trunc

}  // namespace qtilt
