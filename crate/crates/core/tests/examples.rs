macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example should run");
        }
    };
}

example!(series_methods);
example!(nonlinear_adm);
example!(truncation_bounds);
example!(free_particle);
example!(split_step);
example!(operator_series);
example!(classify_data);
example!(expsum_algebra);
example!(run_experiment);
