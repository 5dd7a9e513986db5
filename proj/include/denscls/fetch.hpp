#pragma once

#include <stdexcept>
#include <string>

namespace denscls {

class FetchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChecksumMismatch : public FetchError {
public:
    using FetchError::FetchError;
};

/// Where to get a dataset that is not committed, and what its bytes must
/// hash to. An empty checksum skips verification.
struct FetchSpec {
    std::string url;  // http://host[:port]/path or https://...
    std::string sha256_hex;
};

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(const std::string& bytes);

/// Downloads spec.url to out_path; nothing is written unless the transfer
/// succeeds and the checksum (when configured) matches. Returns the hex
/// digest of the written bytes.
std::string fetch_to_file(const FetchSpec& spec, const std::string& out_path);

}  // namespace denscls
