#include "denscls/fetch.hpp"

#include "httplib.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace denscls {

namespace {

struct ParsedUrl {
    std::string scheme_host_port;  // what httplib::Client takes
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw FetchError("url '" + url + "' has no scheme");
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw FetchError("unsupported scheme '" + scheme + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl parsed;
    parsed.scheme_host_port = path_start == std::string::npos ? url : url.substr(0, path_start);
    parsed.path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (parsed.scheme_host_port.size() == scheme_end + 3)
        throw FetchError("url '" + url + "' has no host");
    return parsed;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw FetchError("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string fetch_to_file(const FetchSpec& spec, const std::string& out_path) {
    const ParsedUrl url = parse_url(spec.url);
    httplib::Client client(url.scheme_host_port);
    client.set_follow_location(true);
    const httplib::Result response = client.Get(url.path);
    if (!response)
        throw FetchError("request to '" + spec.url +
                         "' failed: " + httplib::to_string(response.error()));
    if (response->status != 200)
        throw FetchError("'" + spec.url + "' answered status " +
                         std::to_string(response->status));

    const std::string digest = sha256_hex(response->body);
    if (!spec.sha256_hex.empty() && digest != lowercase(spec.sha256_hex))
        throw ChecksumMismatch("'" + spec.url + "': body hashes to " + digest +
                               ", expected " + lowercase(spec.sha256_hex));

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw FetchError("cannot write '" + out_path + "'");
    out.write(response->body.data(), static_cast<std::streamsize>(response->body.size()));
    if (!out) throw FetchError("write to '" + out_path + "' failed");
    return digest;
}

}  // namespace denscls
