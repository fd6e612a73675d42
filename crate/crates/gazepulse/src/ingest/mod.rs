//! Loading, synchronizing, and validating raw multi-device recordings.

mod io;
mod motion;
mod sync;
mod types;
mod validate;

pub use io::{
    load_recording, load_video, read_activities_csv, read_imu_csv, write_activities_csv,
    write_frame_png, write_imu_csv, write_manifest, MANIFEST_FILE,
};
pub use motion::{activity_magnitude_means, motion_magnitude, normalize_activity_magnitudes};
pub use sync::{estimate_alignment, sync_streams, SYNC_CORRELATION_MIN, SYNC_MAX_OFFSET_S};
pub use types::{
    ActivityAnnotation, ActivityLabel, ActivitySegment, ClockAlignment, Imu3, RawRecording,
    RecordingManifest, SensorSource, SyncedRecording, VideoSource, VideoStream,
};
pub use validate::{
    apply_exclusion_rule, ecg_heart_rate, ppg_heart_rate, validate_ppg_task, TaskValidation,
    BVP_BAND_HZ, ECG_BAND_HZ, EXCLUSION_THRESHOLD_BPM,
};
