#pragma once

#include "chaoskit/errors.hpp"
#include "chaoskit/random.hpp"
#include "chaoskit/parallel.hpp"
#include "chaoskit/systems.hpp"
#include "chaoskit/sequence.hpp"
#include "chaoskit/distfn.hpp"
#include "chaoskit/classify.hpp"
#include "chaoskit/rtchaos.hpp"
#include "chaoskit/theorems.hpp"
#include "chaoskit/fixtures.hpp"
#include "chaoskit/report.hpp"
