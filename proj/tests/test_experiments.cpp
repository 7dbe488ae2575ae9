#include <doctest.h>

#include "hilbert/experiments.hpp"
