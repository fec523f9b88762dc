use unicode_segmentation::UnicodeSegmentation;

/// Splits raw text into lowercased words on UAX #29 word boundaries,
/// dropping segments that contain no letter or digit.
///
/// The language code is accepted for interface symmetry; segmentation is
/// language-neutral and scripts without spaces are not re-segmented.
pub fn tokenize_words(text: &str, _language: &str) -> Vec<String> {
    text.unicode_words().map(str::to_lowercase).collect()
}
