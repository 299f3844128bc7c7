#pragma once

// Shared fixture libraries, embedded as JSON so every test is self-contained.
// write_temp copies them to disk for tests that drive the CLI or file loaders.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "qmt/library.hpp"

namespace fixtures {

// Three theories in an include chain plus one view and one style:
//   top includes mid, mid includes base; v : base -> top.
// Constants: base?plus and base?e (typed), mid?double (typed, defined),
// top?thm (proof constant, untyped here).
inline std::string graph_fixture_json() {
  return R"JSON({
  "theories": [
    {
      "uri": "lib?base",
      "includes": [],
      "constants": [
        {
          "uri": "lib?base?plus",
          "type": {"OMA": [{"OMS": "qmt?meta?arrow"}, {"OMS": "lib?base?iota"},
                            {"OMS": "lib?base?iota"}, {"OMS": "lib?base?iota"}]}
        },
        {"uri": "lib?base?iota"},
        {"uri": "lib?base?e", "type": {"OMS": "lib?base?iota"}}
      ]
    },
    {
      "uri": "lib?mid",
      "includes": ["lib?base"],
      "constants": [
        {
          "uri": "lib?mid?double",
          "type": {"OMA": [{"OMS": "qmt?meta?arrow"}, {"OMS": "lib?base?iota"},
                            {"OMS": "lib?base?iota"}]},
          "def": {"OMBIND": {"binder": {"OMS": "qmt?meta?lambda"},
                              "ctx": [{"name": "x", "type": {"OMS": "lib?base?iota"}}],
                              "body": {"OMA": [{"OMS": "lib?base?plus"},
                                                {"OMV": "x"}, {"OMV": "x"}]}}}
        }
      ]
    },
    {
      "uri": "lib?top",
      "includes": ["lib?mid"],
      "constants": [
        {"uri": "lib?top?thm",
         "def": {"OMA": [{"OMS": "lib?base?plus"}, {"OMS": "lib?base?e"},
                          {"OMS": "lib?base?e"}]}}
      ]
    }
  ],
  "views": [
    {"uri": "lib?v", "domain": "lib?base", "codomain": "lib?top",
     "assignments": [{"for": "lib?base?e", "target": {"OMS": "lib?base?e"}}]}
  ],
  "styles": [
    {"uri": "lib?sty",
     "notations": [{"for": "lib?base?plus", "symbol": "+", "fixity": "infix",
                     "precedence": 10}]}
  ]
})JSON";
}

// Natural-deduction witness fixture. The proof of nd?thm applies the
// existential-introduction rule twice, with witnesses nd?a and nd?b. Types
// are arranged so the built-in simply-typed inference assigns:
//   second argument of the first  ExI use: nd?prfA : nd?PA
//   second argument of the second ExI use: nd?mp applied to nd?prfA : nd?PB
// The theory declares qmt?stlc (as an include) to opt into that type system.
inline std::string nd_fixture_json() {
  return R"JSON({
  "theories": [
    {"uri": "qmt?stlc", "includes": [], "constants": []},
    {
      "uri": "nd",
      "includes": ["qmt?stlc"],
      "constants": [
        {"uri": "nd?PA"},
        {"uri": "nd?PB"},
        {"uri": "nd?conj"},
        {"uri": "nd?ExI"},
        {"uri": "nd?a"},
        {"uri": "nd?b"},
        {"uri": "nd?prfA", "type": {"OMS": "nd?PA"}},
        {"uri": "nd?mp",
         "type": {"OMA": [{"OMS": "qmt?meta?arrow"}, {"OMS": "nd?PA"}, {"OMS": "nd?PB"}]}},
        {"uri": "nd?thm",
         "def": {"OMA": [{"OMS": "nd?conj"},
                          {"OMA": [{"OMS": "nd?ExI"}, {"OMS": "nd?a"}, {"OMS": "nd?prfA"}]},
                          {"OMA": [{"OMS": "nd?ExI"}, {"OMS": "nd?b"},
                                    {"OMA": [{"OMS": "nd?mp"}, {"OMS": "nd?prfA"}]}]}]}}
      ]
    }
  ],
  "views": [],
  "styles": []
})JSON";
}

// Two single-theory libraries with disjoint URIs, for multi-library serving.
inline std::string small_lib_json(const std::string& ns) {
  return std::string(R"({"theories": [{"uri": ")") + ns +
         R"(", "includes": [], "constants": [{"uri": ")" + ns +
         R"(?c"}]}], "views": [], "styles": []})";
}

inline std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "qmt-tests";
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::shared_ptr<const qmt::mmt::Library> graph_fixture() {
  return std::make_shared<const qmt::mmt::Library>(
      qmt::mmt::library_from_json_text(graph_fixture_json()));
}

inline std::shared_ptr<const qmt::mmt::Library> nd_fixture() {
  return std::make_shared<const qmt::mmt::Library>(
      qmt::mmt::library_from_json_text(nd_fixture_json()));
}

}  // namespace fixtures
