// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
