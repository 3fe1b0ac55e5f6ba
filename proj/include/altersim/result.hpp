#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace altersim {

// Minimal value-or-error type used on paths where failures are expected
// outcomes (decoding, transports, pipelines) rather than precondition bugs.
// T and E must be distinct types.
template <typename T, typename E>
class Result {
public:
    Result(T value) : data_(std::in_place_index<0>, std::move(value)) {}
    Result(E error) : data_(std::in_place_index<1>, std::move(error)) {}

    static Result ok(T value) { return Result(std::move(value)); }
    static Result err(E error) { return Result(std::move(error)); }

    bool has_value() const { return data_.index() == 0; }
    explicit operator bool() const { return has_value(); }

    T& value() {
        assert(has_value());
        return std::get<0>(data_);
    }
    const T& value() const {
        assert(has_value());
        return std::get<0>(data_);
    }

    E& error() {
        assert(!has_value());
        return std::get<1>(data_);
    }
    const E& error() const {
        assert(!has_value());
        return std::get<1>(data_);
    }

    T& operator*() { return value(); }
    const T& operator*() const { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> data_;
};

struct IoError {
    std::string message;
};

} // namespace altersim
