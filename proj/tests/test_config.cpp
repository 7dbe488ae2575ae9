#include <doctest.h>

#include "hilbert/config.hpp"
