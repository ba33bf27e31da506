#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slam {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class signature_mismatch : public error {
public:
    using error::error;
};

class precondition_error : public error {
public:
    using error::error;
};

// A dense construction or enumeration would exceed its configured budget.
class cap_exceeded : public error {
public:
    cap_exceeded(const std::string& what, std::size_t requested, std::size_t cap)
        : error(what + " (requested " + std::to_string(requested) + ", cap " + std::to_string(cap) + ")"),
          requested_(requested), cap_(cap) {}
    std::size_t requested() const { return requested_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

class parse_error : public error {
public:
    parse_error(const std::string& msg, int line, int column)
        : error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class repair_failed : public error {
public:
    using error::error;
};

class not_slam : public error {
public:
    using error::error;
};

} // namespace slam
