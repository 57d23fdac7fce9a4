#pragma once

#include <stdexcept>
#include <string>

namespace plate {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// lambda sits inside a transition band (lambda*beta or lambda*alpha ~ m^4)
class DegenerateCase : public Error {
public:
    using Error::Error;
};

class NoEigenvalueInBracket : public Error {
public:
    using Error::Error;
};

class NonSimpleRoot : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class FactorizationFailure : public Error {
public:
    using Error::Error;
};

class HypothesisViolation : public Error {
public:
    using Error::Error;
};

}  // namespace plate
