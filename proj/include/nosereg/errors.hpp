#pragma once

#include <stdexcept>
#include <string>

namespace nosereg {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input problems: bad files, bad arguments, invalid configuration.
// The CLI maps these to exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

class IoError : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class BoundsError : public InputError {
public:
    using InputError::InputError;
};

class EmptyInputError : public InputError {
public:
    using InputError::InputError;
};

// The algorithm ran on well-formed input but could not produce a result.
// The CLI maps these to exit code 2.
class AlgorithmError : public Error {
public:
    using Error::Error;
};

class DegenerateHistogramError : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class LandmarkNotFoundError : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class EyesNotFoundError : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class UndefinedAngleError : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class VerificationImpossibleError : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class RegistrationError : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

} // namespace nosereg
