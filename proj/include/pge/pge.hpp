#pragma once

#include "pge/embed.hpp"
#include "pge/embedding.hpp"
#include "pge/error.hpp"
#include "pge/extrinsic.hpp"
#include "pge/generators.hpp"
#include "pge/graph.hpp"
#include "pge/intrinsic.hpp"
#include "pge/linalg.hpp"
#include "pge/matrix.hpp"
#include "pge/partition.hpp"
#include "pge/reconcile.hpp"
#include "pge/report.hpp"
#include "pge/runtime.hpp"
#include "pge/skipgram.hpp"
#include "pge/spectral.hpp"
