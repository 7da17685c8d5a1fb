#pragma once

#include <stdexcept>
#include <string>

namespace polarnet {

/// Pipeline or precondition failure (CLI exit code 1).
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Problem with user-supplied input: files, rows, ids, flag values (CLI exit code 2).
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace polarnet
