#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace mlg {

using Natural = boost::multiprecision::cpp_int;

}  // namespace mlg
