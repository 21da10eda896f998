#pragma once

#include <hitomezashi/certificate_check.hpp>
#include <hitomezashi/certificate_io.hpp>
#include <hitomezashi/decompose.hpp>
#include <hitomezashi/errors.hpp>
#include <hitomezashi/geometry.hpp>
#include <hitomezashi/pattern.hpp>
#include <hitomezashi/render.hpp>
#include <hitomezashi/sequence.hpp>
#include <hitomezashi/trace.hpp>
#include <hitomezashi/verify.hpp>
