#ifndef TORCODE_H
#define TORCODE_H

/* C interface to the coding pipeline. One tc_run holds a configuration plus
 * everything the stages have produced so far. All functions taking a tc_run
 * are single-threaded per handle; strings returned by tc_* calls stay valid
 * until the next call on the same handle (or tc_run_free). */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tc_run tc_run;

/* Status codes, shared with the CLI exit codes. */
#define TC_OK 0
#define TC_ACCEPT_FAIL 1  /* acceptance criteria failed */
#define TC_CONFIG_ERROR 2 /* bad option, bad config file, or epsilon ledger failure */
#define TC_STAGE_ERROR 3  /* a pipeline stage could not produce its output */

tc_run* tc_run_new(void);
void tc_run_free(tc_run* r);

/* Set one option (same keys as the config file). TC_OK or TC_CONFIG_ERROR. */
int tc_set(tc_run* r, const char* key, const char* value);

/* Load a key=value config file. TC_OK or TC_CONFIG_ERROR. */
int tc_load_config(tc_run* r, const char* path);

/* Current configuration as config-file text. */
const char* tc_config_text(tc_run* r);

/* Run the pipeline up to and including the named stage (one of: sample,
 * reduce, alphabet, chains, cover, refine, shift, count) and write that
 * stage's artifacts under out_dir. TC_OK, TC_CONFIG_ERROR, or TC_STAGE_ERROR. */
int tc_run_stage(tc_run* r, const char* stage);

/* JSON report of everything computed so far. */
const char* tc_report_json(tc_run* r);

/* SVG rendering of the partition (runs stages up to refine if needed);
 * returns NULL with tc_last_error set on failure. */
const char* tc_render_svg(tc_run* r);

/* Run the acceptance criteria; one "PASS name detail" / "FAIL name detail"
 * line per criterion in *out_text (may be NULL if the text is not wanted).
 * Returns TC_OK if all criteria pass, TC_ACCEPT_FAIL otherwise. */
int tc_acceptance(tc_run* r, const char** out_text);

/* Message for the most recent failure on this handle ("" if none). */
const char* tc_last_error(tc_run* r);

#ifdef __cplusplus
}
#endif

#endif
