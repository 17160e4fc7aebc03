#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jkernel
{

// Base class for every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class division_by_zero : public error
{
public:
    division_by_zero() : error("division by zero") {}
    explicit division_by_zero(const std::string &what) : error(what) {}
};

class unsupported_index : public error
{
public:
    using error::error;
};

class snap_failed : public error
{
public:
    using error::error;
};

class tail_too_large : public error
{
public:
    using error::error;
};

class non_squarefree_index : public error
{
public:
    using error::error;
};

class inconsistent_pair : public error
{
public:
    using error::error;
};

class compatibility_failed : public error
{
public:
    using error::error;
};

class constraint_failed : public error
{
public:
    using error::error;
};

class not_in_group : public error
{
public:
    using error::error;
};

class parse_error : public error
{
public:
    using error::error;
};

// Raised by theta_decompose when two Fourier coefficients that the theta
// decomposition forces to be equal are different. Each witness is a pair of
// human readable term descriptions.
class decomposition_inconsistent : public error
{
public:
    using witness = std::pair<std::string, std::string>;

    explicit decomposition_inconsistent(std::vector<witness> w)
        : error(describe(w)), witnesses_(std::move(w))
    {
    }

    const std::vector<witness> &witnesses() const noexcept
    {
        return witnesses_;
    }

private:
    static std::string describe(const std::vector<witness> &w)
    {
        std::string s = "series is not theta-decomposable (" + std::to_string(w.size()) + " violation(s))";
        if (!w.empty()) {
            s += ": " + w.front().first + " vs " + w.front().second;
        }
        return s;
    }

    std::vector<witness> witnesses_;
};

} // namespace jkernel
