#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "fcast/core/errors.hpp"
#include "fcast/ingest/alphavantage.hpp"

namespace fcast::ingest {

namespace {

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse get(const std::string& host, const std::string& path) override {
        httplib::SSLClient client(host);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        auto result = client.Get(path);
        if (!result) {
            throw TransportError("HTTPS GET " + host + " failed: " +
                                 httplib::to_string(result.error()));
        }
        return HttpResponse{result->status, result->body};
    }
};

} // namespace

std::unique_ptr<HttpTransport> make_https_transport() {
    return std::make_unique<HttplibTransport>();
}

} // namespace fcast::ingest
