#pragma once

#include "pcvx/expr.hpp"
#include "pcvx/domain.hpp"
#include "pcvx/dini.hpp"
#include "pcvx/verdict.hpp"
#include "pcvx/oracle.hpp"
#include "pcvx/charact.hpp"
#include "pcvx/theorems.hpp"
#include "pcvx/battery.hpp"
#include "pcvx/report.hpp"
