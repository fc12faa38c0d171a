//! Trains a classifier and a regressor with SMO and inspects the duals.

use steelcast::svm::{
    train_svc, train_svr, write_model, DumpedModel, Kernel, KernelMachine, SvmProblem,
};

fn main() -> steelcast::Result<()> {
    let x = vec![
        vec![-2.0, 0.5],
        vec![-1.0, -0.5],
        vec![1.0, 0.2],
        vec![2.5, 1.0],
    ];
    let labels = vec![-1.0, -1.0, 1.0, 1.0];
    let svc = SvmProblem::new(x.clone(), labels, 10.0, 0.0)?;
    let model = train_svc(&svc, Kernel::Linear)?;
    println!("SVC alphas      {:?}", model.alphas(&svc));
    println!("SVC bias        {:.6}", model.expansion.bias);
    println!("SVC KKT gap     {:.2e}", model.kkt_residual(&svc));
    println!("class of (0.3, 0) = {}", model.predict_class(&[0.3, 0.0])?);

    let y = vec![1.0, 1.5, 3.2, 4.0];
    let svr = SvmProblem::new(x, y, 5.0, 0.1)?;
    let model = train_svr(&svr, Kernel::rbf(2.0)?)?;
    println!("SVR dual value  {:.6}", model.dual_objective(&svr));
    println!("SVR f(0, 0)     {:.6}", model.decision(&[0.0, 0.0])?);
    print!("{}", write_model(&DumpedModel::Svr(model)));
    Ok(())
}
