#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "poc/errors.hpp"
#include "poc/reader.hpp"

namespace poc {

struct HttpReaderConfig {
  std::string endpoint;  // http://host[:port][/path]
  double timeout_seconds = 30.0;
  std::size_t max_attempts = 3;
  double backoff_initial_ms = 200.0;
  double backoff_multiplier = 2.0;
};

struct ParsedEndpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // always starts with '/'
};

inline ParsedEndpoint parse_endpoint(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw DataError("reader endpoint must start with http:// : " + std::string(url));
  if (url.substr(0, scheme_end) != "http")
    throw DataError("reader endpoint: only plain http is supported: " + std::string(url));
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedEndpoint out;
  out.base = std::string(url.substr(0, path_start));
  out.path = path_start == std::string_view::npos ? "/" : std::string(url.substr(path_start));
  if (out.base.size() <= scheme_end + 3) throw DataError("reader endpoint has no host: " + std::string(url));
  return out;
}

// POSTs {"context", "instruction"} and expects {"output"} back. Timeouts,
// connection failures and 5xx responses are retried with exponential
// backoff up to max_attempts total requests; 4xx and malformed bodies fail
// immediately.
class HttpReader final : public ReaderOracle {
 public:
  explicit HttpReader(HttpReaderConfig config) : config_(std::move(config)), endpoint_(parse_endpoint(config_.endpoint)) {
    if (config_.max_attempts == 0) throw DataError("reader: max_attempts must be at least 1");
  }

  std::string query(std::string_view context, std::string_view instruction) const override {
    const std::string body = nlohmann::json{{"context", context}, {"instruction", instruction}}.dump();
    double delay_ms = config_.backoff_initial_ms;
    ReaderError last(ReaderError::Kind::other, "reader: no attempt made");
    for (std::size_t attempt = 1; attempt <= config_.max_attempts; ++attempt) {
      if (attempt > 1) {
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay_ms));
        delay_ms *= config_.backoff_multiplier;
      }
      httplib::Client client(endpoint_.base);
      const auto secs = std::chrono::duration<double>(config_.timeout_seconds);
      client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
      client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
      client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
      auto res = client.Post(endpoint_.path, body, "application/json");
      if (!res) {
        const auto err = res.error();
        const bool timed_out = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout;
        last = ReaderError(timed_out ? ReaderError::Kind::timeout : ReaderError::Kind::connection,
                           "reader: request to " + config_.endpoint + " failed: " + httplib::to_string(err));
        continue;
      }
      if (res->status >= 500) {
        last = ReaderError(ReaderError::Kind::http_status,
                           "reader: " + config_.endpoint + " returned HTTP " + std::to_string(res->status));
        continue;
      }
      if (res->status < 200 || res->status >= 300)
        throw ReaderError(ReaderError::Kind::http_status,
                          "reader: " + config_.endpoint + " returned HTTP " + std::to_string(res->status));
      return parse_output(res->body);
    }
    throw last;
  }

  std::string kind() const override { return "http"; }

  static std::string parse_output(const std::string& body) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception&) {
      throw ReaderError(ReaderError::Kind::malformed_body, "reader: response body is not JSON");
    }
    if (!j.is_object() || !j.contains("output") || !j["output"].is_string())
      throw ReaderError(ReaderError::Kind::malformed_body, "reader: response lacks a string \"output\" field");
    return j["output"].get<std::string>();
  }

 private:
  HttpReaderConfig config_;
  ParsedEndpoint endpoint_;
};

inline std::string http_reader_query(const HttpReaderConfig& config, std::string_view context,
                                     std::string_view instruction) {
  return HttpReader(config).query(context, instruction);
}

}  // namespace poc
