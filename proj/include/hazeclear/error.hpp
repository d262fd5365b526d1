#ifndef HAZECLEAR_ERROR_HPP
#define HAZECLEAR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hazeclear {

enum class ErrorKind {
    io,          // unreadable/unwritable files, missing paths
    format,      // unsupported or malformed file contents
    value,       // bad argument or dimension mismatch
    divergence,  // non-finite intermediate during training
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hazeclear

#endif
