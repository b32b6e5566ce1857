#pragma once

#include "evonet/config.hpp"
#include "evonet/dataset.hpp"
#include "evonet/epnet.hpp"
#include "evonet/experiment.hpp"
#include "evonet/history.hpp"
#include "evonet/keyvalue.hpp"
#include "evonet/mbp.hpp"
#include "evonet/nes.hpp"
#include "evonet/network.hpp"
#include "evonet/patterns.hpp"
#include "evonet/report.hpp"
#include "evonet/verify.hpp"
