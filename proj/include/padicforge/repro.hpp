#pragma once

// Regression table of the worked examples, grouped by section.

#include <string>
#include <string_view>
#include <vector>

#include "padicforge/certify.hpp"

namespace pf {

struct ReproRow {
  std::string section;
  std::string id;
  std::string claim;
  bool pass = false;
  std::string detail;
  double elapsed_ms = 0;
};

/// Runs every row, or only the rows of one section ("section1" .. "section5").
std::vector<ReproRow> run_repro(std::string_view only = {}, const Limits& limits = Limits::from_env());

std::string repro_to_json(const std::vector<ReproRow>& rows);
std::string repro_to_text(const std::vector<ReproRow>& rows);

}  // namespace pf
