#pragma once

#include <doctest.h>

#include "slicefourier/error.hpp"

template <class F>
slicefourier::ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const slicefourier::Error& e) {
        return e.code();
    }
    FAIL("expected an slicefourier::Error");
    return slicefourier::ErrorCode::InvalidArgument;
}

#define CHECK_CODE(expr, code) CHECK(error_code_of([&] { (void)(expr); }) == (code))
