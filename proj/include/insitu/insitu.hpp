#ifndef INSITU_INSITU_HPP
#define INSITU_INSITU_HPP

#include "insitu/benes.hpp"
#include "insitu/blockseq.hpp"
#include "insitu/core.hpp"
#include "insitu/error.hpp"
#include "insitu/factor.hpp"
#include "insitu/linmod.hpp"
#include "insitu/minsim.hpp"
#include "insitu/oracle.hpp"
#include "insitu/random.hpp"
#include "insitu/textio.hpp"

#endif
