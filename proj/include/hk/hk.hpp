#ifndef HK_HK_HPP
#define HK_HK_HPP

#include "hk/airynum.hpp"
#include "hk/gdflows.hpp"
#include "hk/io.hpp"

#endif  // HK_HK_HPP
