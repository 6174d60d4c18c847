#pragma once

#include <stdexcept>
#include <string>

namespace icrl {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DeadStateStep : public Error {
public:
    DeadStateStep() : Error("cannot step from a LavaDead state") {}
};

class NotComposable : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class NoSubsystemAvailable : public Error {
public:
    using Error::Error;
};

class PathExplosion : public Error {
public:
    using Error::Error;
};

class TooManyParameters : public Error {
public:
    using Error::Error;
};

class EmptyEntrySet : public Error {
public:
    using Error::Error;
};

class AllExhausted : public Error {
public:
    AllExhausted() : Error("every subsystem has exhausted its training budget") {}
};

}  // namespace icrl
