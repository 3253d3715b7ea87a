#pragma once

// Umbrella header: the full construct-space auditing toolkit.

#include "ca/constructions.hpp"
#include "ca/criteria.hpp"
#include "ca/distances.hpp"
#include "ca/distribution.hpp"
#include "ca/empirical_tests.hpp"
#include "ca/error.hpp"
#include "ca/io.hpp"
#include "ca/joint.hpp"
#include "ca/label.hpp"
#include "ca/metric.hpp"
#include "ca/random.hpp"
#include "ca/rational.hpp"
#include "ca/scalar.hpp"
#include "ca/support.hpp"
#include "ca/theorem_harness.hpp"
#include "ca/transport.hpp"
