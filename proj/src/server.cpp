#include "qmt/server.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "qmt/errors.hpp"
#include "qmt/result.hpp"

namespace qmt {

namespace {

enum class WireFormat { Xml, Json, Text };

WireFormat detect_format(const std::string& content_type, const std::string& body) {
  if (content_type.find("xml") != std::string::npos) return WireFormat::Xml;
  if (content_type.find("json") != std::string::npos) return WireFormat::Json;
  if (content_type.find("text/plain") != std::string::npos) return WireFormat::Text;
  for (char c : body) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '<') return WireFormat::Xml;
    if (c == '{' || c == '"') return WireFormat::Json;
    break;
  }
  return WireFormat::Text;
}

const char* mime_of(WireFormat format) {
  switch (format) {
    case WireFormat::Xml:
      return "application/xml";
    case WireFormat::Json:
      return "application/json";
    case WireFormat::Text:
      return "text/plain";
  }
  return "text/plain";
}

std::string render(const ResultDocument& result, WireFormat format) {
  switch (format) {
    case WireFormat::Xml:
      return result_to_xml_text(result);
    case WireFormat::Json:
      return result_to_json_text(result);
    case WireFormat::Text:
      return result_to_text(result);
  }
  return result_to_text(result);
}

int status_of(const ResultDocument& result) {
  if (result.ok || result.error_kind == "undefined") return 200;
  if (result.error_kind == "parse-error" || result.error_kind == "type-error") return 400;
  if (result.error_kind == "result-too-large") return 413;
  return 500;
}

}  // namespace

struct QueryServer::Impl {
  std::shared_ptr<const Model> model;
  ServerOptions options;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;

  void install_routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok\n", "text/plain");
    });

    server.Get("/signature", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(xml_serialize(signature_to_xml(model->signature), 2) + "\n",
                      "application/xml");
    });

    server.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
      WireFormat format = detect_format(req.get_header_value("Content-Type"), req.body);
      ResultDocument result;
      try {
        QueryDocument doc = [&] {
          switch (format) {
            case WireFormat::Xml:
              return query_document_from_xml_text(req.body);
            case WireFormat::Json:
              return query_document_from_json_text(req.body, model->signature);
            default:
              return query_document_from_query_text(req.body, model->signature);
          }
        }();
        result = run_query_document(*model, doc);
        if (result.ok && result_element_count(result) > options.result_cap) {
          result = error_result(
              "result-too-large",
              "result holds " + std::to_string(result_element_count(result)) +
                  " elements, above the configured cap of " +
                  std::to_string(options.result_cap),
              result.type_text);
        }
      } catch (const ParseError& e) {
        result = error_result("parse-error", e.what());
      } catch (const std::exception& e) {
        result = error_result("internal-error", e.what());
      }
      res.status = status_of(result);
      res.set_content(render(result, format), mime_of(format));
    });
  }
};

QueryServer::QueryServer(std::shared_ptr<const Model> model, ServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  if (!model) throw std::invalid_argument("QueryServer needs a model");
  impl_->model = std::move(model);
  impl_->options = options;
  impl_->install_routes();
}

QueryServer::~QueryServer() {
  if (impl_ && impl_->thread.joinable()) stop();
}

bool QueryServer::start() {
  Impl& impl = *impl_;
  if (impl.options.port == 0) {
    impl.bound_port = impl.server.bind_to_any_port(impl.options.host);
    if (impl.bound_port < 0) return false;
  } else {
    if (!impl.server.bind_to_port(impl.options.host, impl.options.port)) return false;
    impl.bound_port = impl.options.port;
  }
  impl.thread = std::thread([&impl] { impl.server.listen_after_bind(); });
  impl.server.wait_until_ready();
  return true;
}

void QueryServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void QueryServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int QueryServer::port() const { return impl_->bound_port; }

int resolve_port(int flag_port) {
  const char* env = std::getenv("QMT_PORT");
  if (!env || !*env) return flag_port;
  char* end = nullptr;
  long port = std::strtol(env, &end, 10);
  if (end && *end == '\0' && port >= 0 && port <= 65535) return static_cast<int>(port);
  return flag_port;
}

}  // namespace qmt
