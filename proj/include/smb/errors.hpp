#pragma once

#include <stdexcept>
#include <string>

namespace smb {

// Every recoverable failure surfaces as one of these named errors so that
// callers (and the command-line driver) can report which contract was broken.
struct Error : std::runtime_error {
    Error(const std::string &id, const std::string &what)
        : std::runtime_error(id + ": " + what), id(id) {}
    std::string id;
};

#define SMB_ERROR_TYPE(NAME)                                                   \
    struct NAME : Error {                                                      \
        explicit NAME(const std::string &what) : Error(#NAME, what) {}         \
    }

SMB_ERROR_TYPE(TreeInvalid);
SMB_ERROR_TYPE(LinkUnknown);
SMB_ERROR_TYPE(UnsupportedLoop);
SMB_ERROR_TYPE(RodUnknown);
SMB_ERROR_TYPE(FrameDegenerate);
SMB_ERROR_TYPE(InvalidLadder);
SMB_ERROR_TYPE(InvalidQuantumNumber);
SMB_ERROR_TYPE(RadialSingularity);
SMB_ERROR_TYPE(SectorEmpty);
SMB_ERROR_TYPE(OperatorUnavailable);
SMB_ERROR_TYPE(TooLarge);
SMB_ERROR_TYPE(SpectrumFailed);
SMB_ERROR_TYPE(ExtrapolationUnreliable);
SMB_ERROR_TYPE(InvalidQuery);
SMB_ERROR_TYPE(ConfigError);
SMB_ERROR_TYPE(CheckFailed);

#undef SMB_ERROR_TYPE

} // namespace smb
