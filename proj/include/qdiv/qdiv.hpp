#pragma once

#include <qdiv/divergences.hpp>
#include <qdiv/entanglement.hpp>
#include <qdiv/errors.hpp>
#include <qdiv/io.hpp>
#include <qdiv/linalg.hpp>
#include <qdiv/operators.hpp>
#include <qdiv/random.hpp>
#include <qdiv/smoothing.hpp>
#include <qdiv/spectral.hpp>
#include <qdiv/suite.hpp>
#include <qdiv/tolerances.hpp>
