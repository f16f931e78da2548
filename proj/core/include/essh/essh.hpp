#pragma once

#include "essh/error.hpp"
#include "essh/model.hpp"
#include "essh/quench.hpp"
#include "essh/spectra.hpp"
#include "essh/topology.hpp"
