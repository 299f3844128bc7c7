// Command-line front end: load libraries, check them, evaluate queries,
// persist fact indices, and serve the HTTP API.
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmt/checker.hpp"
#include "qmt/errors.hpp"
#include "qmt/index_cache.hpp"
#include "qmt/library.hpp"
#include "qmt/mmt_model.hpp"
#include "qmt/query_xml.hpp"
#include "qmt/result.hpp"
#include "qmt/server.hpp"

namespace {

using namespace qmt;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;   // library, parse, or type errors
constexpr int kExitUndefined = 3;  // the query evaluated to the error value

std::shared_ptr<const mmt::Library> load_all(const std::vector<std::string>& paths) {
  std::vector<mmt::Library> parts;
  for (const std::string& path : paths) {
    std::vector<std::string> warnings;
    parts.push_back(mmt::load_library(path, &warnings));
    for (const std::string& warning : warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
  }
  if (parts.size() == 1) return std::make_shared<const mmt::Library>(std::move(parts.front()));
  return std::make_shared<const mmt::Library>(mmt::merge_libraries(std::move(parts)));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool has_suffix(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Query files: *.xml or a leading '<' hold the XML document form, *.json the
// JSON document form, anything else the textual syntax.
QueryDocument parse_query_file(const std::string& path, const std::string& content,
                               const Signature& sig) {
  if (has_suffix(path, ".json")) return query_document_from_json_text(content, sig);
  if (has_suffix(path, ".xml")) return query_document_from_xml_text(content);
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '<') {
    return query_document_from_xml_text(content);
  }
  return query_document_from_query_text(content, sig);
}

int run_check(const std::vector<std::string>& paths) {
  std::vector<std::string> warnings;
  std::vector<mmt::Library> parts;
  for (const std::string& path : paths) {
    parts.push_back(mmt::load_library(path, &warnings));
  }
  mmt::Library library =
      parts.size() == 1 ? std::move(parts.front()) : mmt::merge_libraries(std::move(parts));
  FactSet facts = mmt::extract_facts(library);
  std::cout << "theories: " << library.theories().size() << "\n"
            << "views: " << library.views().size() << "\n"
            << "styles: " << library.styles().size() << "\n"
            << "constants: " << library.declaration_count() << "\n"
            << "concept facts: " << facts.concepts.size() << "\n"
            << "relation facts: " << facts.relations.size() << "\n";
  for (const std::string& warning : library.dangling_references()) {
    std::cout << "warning: " << warning << "\n";
  }
  for (const std::string& warning : warnings) {
    std::cout << "warning: " << warning << "\n";
  }
  return kExitOk;
}

int run_eval(const std::string& lib_path, const std::string& query_path, bool lenient,
             const std::string& format, const std::string& cache_path) {
  auto library = load_all({lib_path});
  Model model = mmt::make_model(library);
  if (!cache_path.empty()) {
    std::string warning;
    auto cached = read_index_cache(cache_path, mmt::content_hash(*library), &warning);
    if (cached) {
      model.index = std::move(*cached);
    } else {
      std::cerr << "warning: " << warning << "\n";
    }
  }
  QueryDocument doc = [&] {
    QueryDocument parsed = parse_query_file(query_path, read_file(query_path), model.signature);
    if (lenient) parsed.lenient_filter = true;
    return parsed;
  }();
  ResultDocument result = run_query_document(model, doc);
  if (format == "xml") {
    std::cout << result_to_xml_text(result);
  } else if (format == "json") {
    std::cout << result_to_json_text(result);
  } else {
    std::cout << result_to_text(result);
  }
  if (result.ok) return kExitOk;
  return result.error_kind == "undefined" ? kExitUndefined : kExitBadInput;
}

int run_serve(const std::vector<std::string>& paths, int port, std::size_t cap) {
  auto library = load_all(paths);
  auto model = std::make_shared<const Model>(mmt::make_model(library));
  ServerOptions options;
  options.port = resolve_port(port);
  options.result_cap = cap;
  QueryServer server(model, options);
  if (!server.start()) {
    std::cerr << "error: cannot bind port " << options.port << "\n";
    return kExitBadInput;
  }
  std::cout << "listening on port " << server.port() << "\n" << std::flush;
  server.wait();
  return kExitOk;
}

int run_index(const std::string& lib_path, const std::string& out_path) {
  auto library = load_all({lib_path});
  Index index = build_index(mmt::mmt_signature(), mmt::extract_facts(*library));
  write_index_cache(out_path, index, mmt::content_hash(*library));
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QMT query engine over formal-library facts"};
  app.require_subcommand(1);

  std::vector<std::string> check_paths;
  CLI::App* check = app.add_subcommand("check", "Load a library and report its contents");
  check->add_option("library", check_paths, "library JSON file(s) or directories")
      ->required()
      ->expected(-1);

  std::string eval_lib, eval_query, eval_format = "text", eval_cache;
  bool eval_lenient = false;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a query file against a library");
  eval->add_option("library", eval_lib, "library JSON file or directory")->required();
  eval->add_option("query", eval_query, "query file (textual, XML, or JSON document)")
      ->required();
  eval->add_flag("--lenient-filter", eval_lenient,
                 "exclude elements whose filter is undefined instead of failing");
  eval->add_option("--format", eval_format, "result format")
      ->check(CLI::IsMember({"text", "xml", "json"}));
  eval->add_option("--cache", eval_cache, "index cache file from 'qmt index'");

  std::vector<std::string> serve_paths;
  int serve_port = 8080;
  std::size_t serve_cap = 100000;
  CLI::App* serve = app.add_subcommand("serve", "Serve the HTTP query API");
  serve->add_option("library", serve_paths, "library JSON file(s) or directories")
      ->required()
      ->expected(-1);
  serve->add_option("--port", serve_port, "TCP port (QMT_PORT overrides)");
  serve->add_option("--cap", serve_cap, "result-size cap (elements)");

  std::string index_lib, index_out;
  CLI::App* index = app.add_subcommand("index", "Build and persist the fact index");
  index->add_option("library", index_lib, "library JSON file or directory")->required();
  index->add_option("--out", index_out, "cache file to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(check_paths);
    if (eval->parsed()) {
      return run_eval(eval_lib, eval_query, eval_lenient, eval_format, eval_cache);
    }
    if (serve->parsed()) return run_serve(serve_paths, serve_port, serve_cap);
    if (index->parsed()) return run_index(index_lib, index_out);
  } catch (const qmt::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qmt::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qmt::mmt::LibraryError& e) {
    std::cerr << "library error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
