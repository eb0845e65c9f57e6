#ifndef LATDEV_VERSION_HPP
#define LATDEV_VERSION_HPP

#define LATDEV_VERSION "0.1.0"

#endif
