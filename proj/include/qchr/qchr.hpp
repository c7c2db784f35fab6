#pragma once

#include "qchr/builtins.hpp"
#include "qchr/engine.hpp"
#include "qchr/eq_classes.hpp"
#include "qchr/expr.hpp"
#include "qchr/parser.hpp"
#include "qchr/program.hpp"
#include "qchr/report.hpp"
#include "qchr/store.hpp"
#include "qchr/term.hpp"
#include "qchr/games/connect4.hpp"
#include "qchr/games/matrix.hpp"
#include "qchr/games/nim.hpp"
#include "qchr/games/oracle.hpp"
