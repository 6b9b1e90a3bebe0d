/* C API for the wavelet-corruption denoising toolkit.
 *
 * All functions return a wld_status; 0 means success. On failure a
 * thread-local message is available via wld_last_error(). Objects returned
 * through out-pointers are owned by the caller and released with the
 * matching _free function. Status codes match the CLI exit-code taxonomy.
 */
#ifndef WIA_LD2ND_H
#define WIA_LD2ND_H

#include <stdint.h>

#if defined(_WIN32)
#define WLD_API __declspec(dllexport)
#else
#define WLD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wld_status {
    WLD_OK = 0,
    WLD_ERR_UNKNOWN = 1,
    WLD_ERR_CONFIG = 2,
    WLD_ERR_DATA = 3,
    WLD_ERR_NUMERIC = 4,
    WLD_ERR_SHAPE = 5
} wld_status;

typedef struct wld_image wld_image;
typedef struct wld_model wld_model;

WLD_API const char* wld_version(void);
/* Message for the most recent failure on this thread; empty if none. */
WLD_API const char* wld_last_error(void);

/* ---- images ---------------------------------------------------------- */
/* data may be NULL for a zero-filled image; otherwise height*width doubles
 * in row-major order are copied. */
WLD_API wld_status wld_image_create(int height, int width, const double* data, double range_min,
                                    double range_max, const char* id, wld_image** out);
WLD_API wld_status wld_image_load(const char* path, wld_image** out);
WLD_API wld_status wld_image_save(const wld_image* img, const char* path);
WLD_API void wld_image_free(wld_image* img);
WLD_API wld_status wld_image_dims(const wld_image* img, int* height, int* width);
WLD_API wld_status wld_image_range(const wld_image* img, double* range_min, double* range_max);
/* Copies height*width doubles into buffer. */
WLD_API wld_status wld_image_data(const wld_image* img, double* buffer);
WLD_API const char* wld_image_id(const wld_image* img);

/* ---- wavelet corruption ---------------------------------------------- */
/* Fills sigma[4] with the named preset (mayo2016 or mayo2020): LL, LH, HL, HH. */
WLD_API wld_status wld_preset_sigmas(const char* name, double sigma[4]);
WLD_API wld_status wld_corrupt(const wld_image* img, const double sigma[4], uint64_t seed,
                               uint64_t draw_index, wld_image** out);
/* Corrupts a stored image file; writes the result plus a JSON sidecar with
 * the empirical and predicted residual std. */
WLD_API wld_status wld_corrupt_file(const char* in_path, const char* out_path,
                                    const double sigma[4], uint64_t seed, uint64_t draw_index);

/* ---- metrics ---------------------------------------------------------- */
WLD_API wld_status wld_psnr(const wld_image* ref, const wld_image* test, double peak,
                            double* out_db);
WLD_API wld_status wld_ssim(const wld_image* ref, const wld_image* test, double peak, double* out);
/* out_mse[4] = LL, LH, HL, HH mean squared subband differences. */
WLD_API wld_status wld_subband_difference(const wld_image* a, const wld_image* b,
                                          double out_mse[4]);
/* Writes a subband-difference report for two image files; out params may be
 * NULL. hf_ll_ratio = (LH+HL+HH) / LL. */
WLD_API wld_status wld_analyze_files(const char* a_path, const char* b_path, const char* out_path,
                                     double* hf_ll_ratio);

/* ---- phantoms --------------------------------------------------------- */
WLD_API wld_status wld_generate_phantom(int size, uint64_t seed, uint64_t index, wld_image** out);
WLD_API wld_status wld_simulate_ldct(const wld_image* img, double dose_factor, uint64_t seed,
                                     wld_image** out);
/* Writes n phantoms (ids p0000..) plus manifest.json into out_dir. When
 * dose_factor > 0 a paired `<id>_ld` low-dose simulation is written too. */
WLD_API wld_status wld_phantom_dataset(const char* out_dir, int n, int size, uint64_t seed,
                                       double dose_factor);

/* ---- training / inference --------------------------------------------- */
/* config_json: the resolved training configuration as a JSON string (the
 * CLI merges file + overrides before calling). Writes resolved_config.json,
 * loss.log and checkpoints into out_dir. */
WLD_API wld_status wld_train(const char* config_json, const char* out_dir);
WLD_API wld_status wld_model_load(const char* checkpoint_path, wld_model** out);
WLD_API void wld_model_free(wld_model* model);
/* pad_to_stride != 0 reflect-pads the input to the backbone stride and
 * crops the result back; otherwise indivisible dims are an error. */
WLD_API wld_status wld_denoise(wld_model* model, const wld_image* img, int pad_to_stride,
                               wld_image** out);

/* ---- evaluation -------------------------------------------------------- */
/* Pairs images of ref_dir and test_dir by id (test id == ref id + suffix;
 * suffix may be NULL/empty). peak <= 0 uses the reference intensity span.
 * Writes a JSON report; mean out-params may be NULL. */
WLD_API wld_status wld_evaluate_dirs(const char* ref_dir, const char* test_dir,
                                     const char* out_path, double peak, int nps_patch,
                                     const char* test_suffix, double* mean_psnr_db,
                                     double* mean_ssim);

#ifdef __cplusplus
}
#endif

#endif /* WIA_LD2ND_H */
