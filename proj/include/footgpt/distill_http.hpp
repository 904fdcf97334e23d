#pragma once

// Separate header so httplib is only compiled into translation units that
// actually talk to a live endpoint.

#include <map>
#include <string>

#include <httplib.h>

#include "footgpt/distill.hpp"
#include "footgpt/errors.hpp"

namespace footgpt {

// Splits "http://host:port/path" into client target and request path.
inline HttpPostFn make_httplib_transport() {
    return [](const std::string& url,
              const std::map<std::string, std::string>& headers,
              const std::string& json_body) -> HttpResult {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            throw TransportError("endpoint url needs a scheme: " + url);
        }
        auto path_start = url.find('/', scheme_end + 3);
        const std::string base =
            path_start == std::string::npos ? url : url.substr(0, path_start);
        const std::string path =
            path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
        httplib::Headers req_headers;
        for (const auto& [k, v] : headers) {
            if (k == "Content-Type") continue;
            req_headers.emplace(k, v);
        }
        auto res = client.Post(path, req_headers, json_body, "application/json");
        HttpResult out;
        if (!res) {
            out.status = 0;
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        for (const auto& [k, v] : res->headers) {
            out.headers[k] = v;
        }
        return out;
    };
}

}  // namespace footgpt
